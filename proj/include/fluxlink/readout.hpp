#pragma once

#include "fluxlink/lattice.hpp"
#include "fluxlink/observe.hpp"
#include "fluxlink/spin_ops.hpp"

#include <json.hpp>

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace fluxlink::readout {

using model::cplx;
using model::Mat3;

// Spins (level k = 1 - m, so k = 0 is S^z = +1) x cavity Fock space x
// optional ancilla qubit. Index: ((s * fock_cut + n) * A + a).
class CavityRegister {
public:
    static constexpr int max_spins = 8;

    CavityRegister(int n_spins, int fock_cut, bool with_ancilla);

    int n_spins() const { return n_spins_; }
    int fock_cut() const { return fock_cut_; }
    bool has_ancilla() const { return ancilla_; }
    int spin_dim() const { return spin_dim_; }
    std::size_t dim() const { return amp_.size(); }
    std::size_t index(int s, int n, int a) const { return (std::size_t(s) * fock_cut_ + n) * anc_dim() + a; }

    std::vector<cplx>& amp() { return amp_; }
    const std::vector<cplx>& amp() const { return amp_; }

    // spins (length 3^n) x vacuum x ancilla (length 2, ignored without ancilla)
    void prepare(const std::vector<cplx>& spins, std::array<cplx, 2> ancilla = {1.0, 0.0});

    double norm() const;
    // population of the two highest Fock levels
    double leakage() const;
    // population with zero photons
    double vacuum_population() const;
    // (unnormalized) spin amplitudes of the n = 0, ancilla = a slice
    std::vector<cplx> spin_slice(int a) const;
    std::array<double, 2> ancilla_polarization() const;  // <sigma_x>, <sigma_y>

private:
    int anc_dim() const { return ancilla_ ? 2 : 1; }

    int n_spins_;
    int fock_cut_;
    bool ancilla_;
    int spin_dim_;
    std::vector<cplx> amp_;
};

// Per-spin weights of the dispersive operator O, indexed by level k.
using Weights = std::vector<std::array<int, 3>>;

Weights wilson_weights(int n);        // O = sum_j sum_k k |k><k|
Weights thooft_pi_weights(int n);     // O = sum_j |S^z=0><S^z=0|

enum class RotationMode { direct, two_step };

// Smallest Fock cutoff accepted for the given displacement magnitude.
int fock_cut_for(double max_abs_alpha);

Eigen::MatrixXcd displacement_matrix(int fock_cut, cplx alpha);

void displacement(CavityRegister& reg, cplx alpha, nlohmann::json* log = nullptr);
// exp(i theta n O) with O from the weights
void dispersive_rotation(CavityRegister& reg, double theta, const Weights& w, RotationMode mode = RotationMode::direct,
                         nlohmann::json* log = nullptr);
// exp(i theta n |1><1|_A)
void ancilla_rotation(CavityRegister& reg, double theta, nlohmann::json* log = nullptr);
// D(beta) on the ancilla = 1 branch, built from two displacements and two ancilla rotations
void controlled_displacement(CavityRegister& reg, cplx beta, nlohmann::json* log = nullptr);
void spin_gate(CavityRegister& reg, int spin, const Mat3& u, nlohmann::json* log = nullptr);

// Displacement magnitudes for a target Omega: |alpha| = |beta| = sqrt(Omega / 2).
std::array<cplx, 2> sequence_amplitudes(double phi, double omega);

// Seven-gate sequence from vacuum (first rotation omitted). With
// `controlled` the beta displacements are conditioned on the ancilla.
void geometric_sequence(CavityRegister& reg, double phi, double theta, double omega, const Weights& w,
                        bool controlled = false, RotationMode mode = RotationMode::direct,
                        nlohmann::json* log = nullptr);

// exp(-i Omega sin(theta O + phi)) on the spin factor (diagonal).
std::vector<cplx> geometric_closed_form(double phi, double theta, double omega, const Weights& w);

// Per-spin frame A_j = lambda_j R_j^dag Z R_j with Z = diag(1, xi, xi^2).
struct Frame {
    Mat3 r;
    cplx lambda;
};
Frame clock_frame(const Mat3& a);

enum class Method { geometric, single_photon };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct ProtocolOptions {
    Method method = Method::geometric;
    int fock_cut = 0;  // 0: smallest accepted by the guard
    RotationMode rotation = RotationMode::direct;
    bool repeat = false;      // rerun on the post-measurement branches
    bool transcript = false;  // record the gate list of the first run
};

struct RunResult {
    cplx polarization;         // <sigma_x> + i <sigma_y>
    double repeat_sigma_x = 0.0;
    double vacuum_population = 1.0;
    double norm_defect = 0.0;
};

struct ProtocolResult {
    cplx value;  // <W> or <Upsilon>
    cplx v;
    cplx v_prime;
    RunResult run_v;
    RunResult run_v_prime;
    nlohmann::json transcript = nlohmann::json::array();
};

ProtocolResult wilson_protocol(const observe::StateVector& psi, const lattice::LatticeGeometry& g,
                               const lattice::Path& loop, const ProtocolOptions& opt = {});

ProtocolResult thooft_protocol(const observe::StateVector& psi, const lattice::Path& path, double varphi,
                               const ProtocolOptions& opt = {});

struct FidelityParams {
    double gamma = 66.7e3;
    double chi = 2.0 * 3.141592653589793 * 99.8e6;
    double kappa = 22.2e3;
    double eta_a = 1.0;
    double eta_p = 1.0;
    int n = 1;
    double epsilon = 0.0;
    double chi_a = 0.0;  // 0: same as chi

    void validate() const;
};

double fidelity_gp(const FidelityParams& fp, double theta, double omega);
double fidelity_sp(const FidelityParams& fp, double theta);
double mean_gate_time(double theta, double chi, double kappa);
// 1 - exp(-gamma tbar): the per-spin penalty in the single-photon bound
double sp_penalty(const FidelityParams& fp, double theta);

struct Inhomogeneity {
    double exact_bound = 0.0;
    double small_eps = 0.0;
};
Inhomogeneity inhomogeneity_error(double theta, int n, double epsilon);

} // namespace fluxlink::readout
