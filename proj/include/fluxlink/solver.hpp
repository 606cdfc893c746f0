#pragma once

#include "fluxlink/basis.hpp"
#include "fluxlink/hamiltonians.hpp"
#include "fluxlink/lattice.hpp"
#include "fluxlink/sparse.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fluxlink::solver {

using model::cplx;
using StateVec = std::vector<cplx>;

struct EigResult {
    std::vector<double> energies;
    std::vector<StateVec> vectors;
    std::vector<double> residuals;
    int iterations = 0;
    double norm_estimate = 0.0;
    bool degenerate_ground = false;
};

inline constexpr std::size_t dense_cap = 4096;

// Full spectrum; vectors are returned only when want_vectors is set.
EigResult dense_eig(const model::SparseOperator& h, bool want_vectors = true);

struct LanczosOptions {
    int k = 1;
    double tol = 1e-10;
    std::uint64_t seed = 12345;
    int max_iterations = 2000;
    int max_basis = 80;
    const StateVec* start = nullptr;  // warm start; random when null
    // dimensions up to this size are solved densely
    std::size_t dense_below = 64;
};

// Lowest k eigenpairs by Lanczos with full reorthogonalization and thick
// restarts. The start vector comes from a seeded mt19937_64.
EigResult lanczos_ground(const model::SparseOperator& h, const LanczosOptions& opt = {});

enum class Builder { qlm, imp, eff };
std::string to_string(Builder b);
Builder parse_builder(const std::string& s);

enum class Control { g2_elec, v, u };
std::string to_string(Control c);
Control parse_control(const std::string& s);

struct FixedParams {
    double g2_elec = 1.0;
    double g2_mag_inv = 2.0 / 75.0;
    double v = 0.0;
    double u = 75.0;
    double j = 1.0;
    model::EffForm eff_form = model::EffForm::second_order;
};

struct ObservableSpec {
    std::string name;  // "upsilon", "gauss_density", "wilson"
    double varphi = 3.141592653589793;
    lattice::StringConvention convention = lattice::StringConvention::alternating;
    int target_plaquette = -1;  // -1: middle plaquette
};

struct SweepRecord {
    double control = 0.0;
    double e0 = 0.0;
    double gap = 0.0;
    std::vector<std::pair<std::string, double>> observables;
    bool degenerate = false;
    std::string error;
    std::size_t dim = 0;
    int iterations = 0;
};

struct SweepOptions {
    bool parallel = false;  // drops warm starts
    LanczosOptions lanczos;
    model::BasisOptions basis;
    // Basis for the two-body model: charge_sector is exact for it,
    // gauss_truncated is the cheaper approximation.
    model::BasisKind imp_basis = model::BasisKind::charge_sector;
    std::function<void(const SweepRecord&)> progress;
};

std::vector<SweepRecord> sweep(Builder builder, const lattice::LatticeGeometry& g, Control control,
                               const std::vector<double>& grid, const FixedParams& fixed,
                               const std::vector<ObservableSpec>& observables, const SweepOptions& opt = {});

// Basis kind each builder works in.
model::BasisKind basis_for(Builder b, const SweepOptions& opt);

model::SparseOperator build(Builder b, const lattice::LatticeGeometry& g, const model::GaugeBasis& basis,
                            Control control, double value, const FixedParams& fixed);

} // namespace fluxlink::solver
