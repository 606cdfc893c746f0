#pragma once

#include "fluxlink/device.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace fluxlink::network {

enum class ChargeElement { exact, tight_binding };

struct NetworkParams {
    device::DeviceParams link;
    device::DeviceParams ancilla;
    double e_cl = 0.0;
    // Exactly one of these is set; the other is derived.
    std::optional<double> xi;
    std::optional<double> e_cc;

    void validate() const;
    double resolved_e_cc() const;
    double resolved_xi() const;
};

// Strong-coupling cascade, energies in units of the ancilla Josephson energy.
NetworkParams strong_coupling_preset();

struct CouplingSet {
    double delta = 0.0;
    double u = 0.0;
    double v = 0.0;
    double j = 0.0;
    double g2_elec = 0.0;
    double g2_mag_inv = 0.0;
    double product = 0.0;

    double e_cc = 0.0;
    double phi_plus = 0.0;                 // <+1|phi|+1> of the shifted link
    double phi_ge = 0.0;                   // <g|phi_a|e> of the shifted ancilla
    std::complex<double> n_plus_zero;      // <+1|n|0> used for J
    double doublet_splitting = 0.0;
    bool gauss_constraint_absent = false;  // e_cl == 0 gives U == 0
    std::string charge_source = "exact";
};

CouplingSet derive_couplings(const NetworkParams& np, int dim = device::default_dim,
                             ChargeElement charge = ChargeElement::exact);

// Shifted devices as used by derive_couplings.
device::DeviceParams shifted_link(const NetworkParams& np);
device::DeviceParams shifted_ancilla(const NetworkParams& np);

// Inverse capacitance kernel D(k)/C.
double cap_kernel(double kx, double ky, double xi);

struct QuadratureReport {
    double value = 0.0;
    double imag_discarded = 0.0;
    int points = 0;
};

// c(dx) in units of 1/C by periodic trapezoid quadrature over the Brillouin zone.
QuadratureReport cap_inverse_report(int dx, int dy, double xi, double rel_tol = 1e-10);
double cap_inverse(int dx, int dy, double xi, double rel_tol = 1e-10);

// Closed form of c(0) via the elliptic integral.
double cap_c0_closed(double xi);
// Continuum approximation (1/(2 pi xi^2)) K0(r/xi) for r > 0.
double cap_far_k0(double r, double xi);

// E^c_C / E_C from the closed forms.
double ecc_ratio(double xi);
// Inverse of ecc_ratio by bisection on xi in (0, 50].
double xi_from_ecc_ratio(double ratio);

struct DriveParams {
    double omega_f = 0.0;
    double g_strength = 0.0;
    double rabi = 0.0;
    double detuning = 0.0;
};

DriveParams make_drive(const device::QutritData& q, const device::Spectrum& s, double omega_f, double g);

struct StarkTerm {
    int qutrit = 0;  // QutritIndex of the shifted state
    int level = 0;   // excited eigenstate index
    double detuning = 0.0;
    double contribution = 0.0;
};

struct StarkResult {
    std::array<double, 3> shifts{};  // by QutritIndex
    double v = 0.0;
    double v_eff = 0.0;
    std::vector<StarkTerm> terms;
};

struct StarkOptions {
    int max_level = 20;
    double weight_cut = 1e-6;  // relative to beta^2
    double resonance_floor = 1e-6;  // absolute, same unit as the energies
};

StarkResult stark_shift(const device::QutritData& q, const device::Spectrum& s, const DriveParams& d,
                        const StarkOptions& opt = {});

struct DriveBounds {
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    double g2_lo = 0.0;
    double g2_hi = 0.0;
    int omega_points = 201;
    int g2_points = 21;
    double exclusion = 1e-3;  // minimum |detuning| to any included level
};

struct DriveOptimum {
    DriveParams drive;
    StarkResult stark;
    double objective = 0.0;
    int evaluations = 0;
};

DriveOptimum optimize_drive(const device::QutritData& q, const device::Spectrum& s, const DriveBounds& b,
                            const StarkOptions& opt = {});

struct DecoherenceBudget {
    double gap_min = 0.0;        // same unit as the couplings
    double t_sim = 0.0;          // seconds
    double ancilla_error = 0.0;
    long long max_links = 0;
    bool infinite_time = false;
};

// e_unit_hz converts one energy unit of the couplings to Hz.
DecoherenceBudget decoherence_budget(const CouplingSet& cs, double e_unit_hz, double t1_ancilla,
                                     int links_per_ancilla = 2, double error_budget = 0.01);

} // namespace fluxlink::network
