#pragma once

#include "fluxlink/lattice.hpp"
#include "fluxlink/network.hpp"
#include "fluxlink/readout.hpp"
#include "fluxlink/solver.hpp"

#include <string>
#include <vector>

namespace fluxlink::cli {

struct GeometrySpec {
    lattice::Kind kind = lattice::Kind::ladder;
    int nx = 4;
    int ny = 2;
    lattice::PairRule pair_rule = lattice::PairRule::all_sharing;

    lattice::LatticeGeometry build() const;
    std::string text() const;  // "ladder:4" or "square:3x3"
};

GeometrySpec parse_geometry(const std::string& s);

struct SweepSpec {
    solver::Builder builder = solver::Builder::qlm;
    solver::Control control = solver::Control::g2_elec;
    std::vector<double> grid;  // empty: single point at the fixed value
    std::vector<std::string> observables{"upsilon"};
    solver::FixedParams fixed;
    model::BasisKind imp_basis = model::BasisKind::charge_sector;
    double varphi = 3.141592653589793;
    int target_plaquette = -1;

    // grid, or the single fixed value of the control when the grid is empty
    std::vector<double> points() const;
};

struct DriveSpec {
    double omega_lo = 1.4;  // units of the link E_J
    double omega_hi = 1.8;
    double g2_lo = 0.2;     // units of E_J^2
    double g2_hi = 0.2;
    int omega_points = 201;
};

struct ReadoutSpec {
    readout::FidelityParams fidelity{66.7e3, 2.0 * 3.141592653589793 * 99.8e6, 22.2e3, 0.919, 0.9, 9, 0.01, 0.0};
    readout::Method method = readout::Method::geometric;
    double theta = 2.0 * 3.141592653589793 / 3.0;
    double omega = 3.141592653589793 / 1.7320508075688772;
};

struct Units {
    bool ghz = false;
    double eaj_ghz = 1.0;  // GHz per energy unit when ghz is set

    double factor() const { return ghz ? eaj_ghz : 1.0; }
    std::string text() const;
};

Units parse_units(const std::string& s);

struct OutputSpec {
    std::string dir = "out";
    std::string prefix = "run";
    bool svg = true;
    bool log_x = false;
};

struct RunConfig {
    std::string preset = "strong_coupling";
    network::NetworkParams network = network::strong_coupling_preset();
    int device_dim = device::default_dim;
    network::ChargeElement charge = network::ChargeElement::exact;
    GeometrySpec geometry;
    SweepSpec sweep;
    DriveSpec drive;
    ReadoutSpec readout;
    OutputSpec output;
    Units units;
    model::Convention convention = model::Convention::signed_gauss;
    lattice::StringConvention string_convention = lattice::StringConvention::alternating;

    void validate() const;
};

// INI text with sections [device.link], [device.ancilla], [network], [drive],
// [sweep], [readout], [output]. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Fully resolved config; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const RunConfig& c);

// Shortest decimal that round-trips to the same double; "nan"/"inf" otherwise.
std::string format_double(double x);

// FNV-1a of the text, as 16 hex digits.
std::string content_hash(const std::string& text);

} // namespace fluxlink::cli
