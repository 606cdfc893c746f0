#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace fluxlink::device {

// One fluxonium. Energies share whatever reference unit the caller picks;
// presets use the ancilla Josephson energy.
struct DeviceParams {
    double e_c = 0.0;
    double e_j = 0.0;
    double e_l = 0.0;
    double phi_off = 0.0;

    void validate() const;
    // True when phi_off is neither 0 nor pi (accepted, but outside the presets).
    bool offset_flagged() const;
    double beta() const;
    double omega() const;
};

struct Spectrum {
    int dim = 0;
    std::vector<double> energies;
    Eigen::MatrixXd vectors; // columns are eigenvectors in the oscillator basis
    double beta = 0.0;
    bool converged = false;
    // max |E_k(dim) - E_k(dim-20)| over the lowest five levels
    double convergence_delta = 0.0;
};

// Index layout for QutritData arrays and matrices: 0 -> |0>, 1 -> |+1>, 2 -> |-1>, 3 -> |s>.
enum QutritIndex : int { q_zero = 0, q_plus = 1, q_minus = 2, q_next = 3 };

struct QutritData {
    std::array<double, 3> energies{};
    Eigen::MatrixXd states;            // dim x 4
    Eigen::Matrix4d phi_elements;      // <i|phi|j>
    Eigen::Matrix4cd charge_elements;  // <i|n|j>
    Eigen::Matrix4d h_elements;        // <i|H|j>
    double splitting_v = 0.0;
    double doublet_splitting = 0.0;
    int s_index = 3;
};

struct TightBinding {
    double sigma = 0.0;
    double hopping_t = 0.0;
    double band_gap = 0.0;
};

inline constexpr int default_dim = 80;

// Josephson tables in the oscillator basis: cos(phi) and sin(phi).
Eigen::MatrixXd cos_phi_table(int dim, double beta);
Eigen::MatrixXd sin_phi_table(int dim, double beta);

Eigen::MatrixXd ho_matrix(const DeviceParams& p, int dim);

Spectrum spectrum(const DeviceParams& p, int dim = default_dim);

Eigen::MatrixXd phi_operator(int dim, double beta);
Eigen::MatrixXcd charge_operator(int dim, double beta);

QutritData qutrit_states(const Spectrum& s);

TightBinding tb_quantities(const DeviceParams& p);
double tb_hopping(double sigma, double e_j);
double tb_hj_element(int m1, int m2, const DeviceParams& p);
std::complex<double> tb_charge_element(int m1, int m2, double sigma);

// Device with E_C chosen so that (8 E_C / E_J)^{1/4} = sigma.
DeviceParams device_with_sigma(double sigma, double e_j, double e_l);

} // namespace fluxlink::device
