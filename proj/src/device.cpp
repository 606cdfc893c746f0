#include "fluxlink/device.hpp"

#include "fluxlink/errors.hpp"
#include "fluxlink/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace fluxlink::device {

using std::numbers::pi;

void DeviceParams::validate() const {
    if (!(e_c > 0.0)) throw ArgumentError("device: e_c must be positive");
    if (!(e_j >= 0.0)) throw ArgumentError("device: e_j must be non-negative");
    if (!(e_l > 0.0)) throw ArgumentError("device: e_l must be positive");
    if (!std::isfinite(phi_off)) throw ArgumentError("device: phi_off must be finite");
}

bool DeviceParams::offset_flagged() const {
    const double r = std::remainder(phi_off, 2.0 * pi);
    return std::abs(r) > 1e-12 && std::abs(std::abs(r) - pi) > 1e-12;
}

double DeviceParams::beta() const { return std::pow(8.0 * e_c / e_l, 0.25); }

double DeviceParams::omega() const { return std::sqrt(8.0 * e_l * e_c); }

namespace {

// |<m|e^{i phi}|n>| without the parity sign, for phi = beta (a + a^dag)/sqrt(2).
Eigen::MatrixXd displacement_magnitudes(int dim, double beta) {
    Eigen::MatrixXd out(dim, dim);
    const double ln2 = std::numbers::ln2;
    const double x = 0.5 * beta * beta;
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n <= m; ++n) {
            const int lo = n;
            const int d = m - n;
            const double lp = 0.5 * (2.0 * lo * ln2 + 2.0 * specfun::log_factorial(lo) - (n + m) * ln2 -
                                     specfun::log_factorial(n) - specfun::log_factorial(m));
            const double v =
                std::exp(lp + d * std::log(beta) - 0.25 * beta * beta) * specfun::laguerre(lo, d, x);
            out(m, n) = v;
            out(n, m) = v;
        }
    }
    return out;
}

} // namespace

Eigen::MatrixXd cos_phi_table(int dim, double beta) {
    Eigen::MatrixXd t = displacement_magnitudes(dim, beta);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const int d = std::abs(m - n);
            if (d % 2) t(m, n) = 0.0;
            else if ((d / 2) % 2) t(m, n) = -t(m, n);
        }
    }
    return t;
}

Eigen::MatrixXd sin_phi_table(int dim, double beta) {
    Eigen::MatrixXd t = displacement_magnitudes(dim, beta);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const int d = std::abs(m - n);
            if (d % 2 == 0) t(m, n) = 0.0;
            else if (((d - 1) / 2) % 2) t(m, n) = -t(m, n);
        }
    }
    return t;
}

Eigen::MatrixXd ho_matrix(const DeviceParams& p, int dim) {
    p.validate();
    if (dim < 3) throw ArgumentError("ho_matrix: dim must be at least 3");
    const double beta = p.beta();
    const double w = p.omega();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) h(n, n) = w * (n + 0.5);
    if (p.e_j == 0.0) return h;
    // cos(phi + phi_off) = cos(phi) cos(phi_off) - sin(phi) sin(phi_off)
    const double c = std::cos(p.phi_off);
    const double s = std::sin(p.phi_off);
    if (std::abs(c) > 1e-15) h -= p.e_j * c * cos_phi_table(dim, beta);
    if (std::abs(s) > 1e-15) h += p.e_j * s * sin_phi_table(dim, beta);
    return h;
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if (v(k) < 0) v = -v;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(const Eigen::MatrixXd& h, bool vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, vectors ? Eigen::ComputeEigenvectors
                                                                : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "spectrum: dense eigensolver failed for dim " << h.rows() << " (Eigen info "
           << int(es.info()) << ")";
        throw NumericError(os.str());
    }
    return es;
}

} // namespace

Spectrum spectrum(const DeviceParams& p, int dim) {
    const Eigen::MatrixXd h = ho_matrix(p, dim);
    auto es = solve(h, true);
    Spectrum s;
    s.dim = dim;
    s.beta = p.beta();
    s.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    s.vectors = es.eigenvectors();
    for (int k = 0; k < dim; ++k) fix_sign(s.vectors.col(k));

    if (dim - 20 >= 3) {
        auto coarse = solve(ho_matrix(p, dim - 20), false);
        const int nc = std::min(5, dim - 20);
        double delta = 0.0;
        for (int k = 0; k < nc; ++k)
            delta = std::max(delta, std::abs(s.energies[k] - coarse.eigenvalues()(k)));
        s.convergence_delta = delta;
        const double scale = std::max({p.e_j, p.e_c, p.omega()});
        s.converged = delta <= 1e-6 * scale;
    }
    return s;
}

Eigen::MatrixXd phi_operator(int dim, double beta) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    const double f = beta / std::sqrt(2.0);
    for (int k = 1; k < dim; ++k) {
        x(k - 1, k) = f * std::sqrt(double(k));
        x(k, k - 1) = f * std::sqrt(double(k));
    }
    return x;
}

Eigen::MatrixXcd charge_operator(int dim, double beta) {
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
    const double f = 1.0 / (std::sqrt(2.0) * beta);
    for (int k = 1; k < dim; ++k) {
        n(k, k - 1) = std::complex<double>(0.0, f * std::sqrt(double(k)));
        n(k - 1, k) = std::complex<double>(0.0, -f * std::sqrt(double(k)));
    }
    return n;
}

QutritData qutrit_states(const Spectrum& s) {
    if (s.dim < 4 || s.energies.size() < 4) throw ArgumentError("qutrit_states: need at least 4 levels");
    const auto& e = s.energies;
    const double split = e[2] - e[1];
    if (!(e[3] - e[2] >= 10.0 * split)) {
        std::ostringstream os;
        os << "qutrit_states: doublet splitting " << split << " not separated from level 3 (gap "
           << e[3] - e[2] << ")";
        throw DegeneracyError(os.str());
    }

    const Eigen::MatrixXd phi = phi_operator(s.dim, s.beta);
    const Eigen::MatrixXd doublet = s.vectors.middleCols(1, 2);
    const Eigen::Matrix2d pd = doublet.transpose() * phi * doublet;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(pd);
    // ascending eigenvalues: column 0 has negative flux, column 1 positive
    Eigen::VectorXd plus = doublet * es.eigenvectors().col(1);
    Eigen::VectorXd minus = doublet * es.eigenvectors().col(0);
    if (plus.dot(s.vectors.col(1)) < 0) plus = -plus;
    if (minus.dot(s.vectors.col(1)) < 0) minus = -minus;

    QutritData q;
    q.s_index = 3;
    q.states.resize(s.dim, 4);
    q.states.col(q_zero) = s.vectors.col(0);
    q.states.col(q_plus) = plus;
    q.states.col(q_minus) = minus;
    q.states.col(q_next) = s.vectors.col(3);

    // H is diagonal in the eigenbasis, so its qutrit elements follow from overlaps.
    const Eigen::MatrixXd overlaps = s.vectors.leftCols(4).transpose() * q.states;
    const Eigen::Vector4d e4(e[0], e[1], e[2], e[3]);
    q.h_elements = overlaps.transpose() * e4.asDiagonal() * overlaps;
    q.phi_elements = q.states.transpose() * phi * q.states;
    const Eigen::MatrixXcd sc = q.states.cast<std::complex<double>>();
    q.charge_elements = sc.adjoint() * charge_operator(s.dim, s.beta) * sc;

    q.energies = {q.h_elements(q_zero, q_zero), q.h_elements(q_plus, q_plus), q.h_elements(q_minus, q_minus)};
    q.splitting_v = 0.5 * (q.energies[1] + q.energies[2]) - q.energies[0];
    q.doublet_splitting = split;
    return q;
}

double tb_hopping(double sigma, double e_j) {
    const double s2 = sigma * sigma;
    return e_j * std::exp(-pi * pi / s2) * (0.25 * s2 - 0.5 * pi * pi + std::exp(-0.25 * s2));
}

TightBinding tb_quantities(const DeviceParams& p) {
    if (!(p.e_j > 0.0)) throw ArgumentError("tb_quantities: e_j must be positive");
    if (!(p.e_c > 0.0)) throw ArgumentError("tb_quantities: e_c must be positive");
    TightBinding tb;
    tb.sigma = std::pow(8.0 * p.e_c / p.e_j, 0.25);
    tb.hopping_t = tb_hopping(tb.sigma, p.e_j);
    tb.band_gap = std::sqrt(8.0 * p.e_c * p.e_j);
    return tb;
}

double tb_hj_element(int m1, int m2, const DeviceParams& p) {
    if (!(p.e_j > 0.0)) throw ArgumentError("tb_hj_element: e_j must be positive");
    const double sigma = std::pow(8.0 * p.e_c / p.e_j, 0.25);
    const double s2 = sigma * sigma;
    const double dm = m1 - m2;
    return p.e_j * std::exp(-pi * pi * dm * dm / s2) *
           (0.25 * s2 - 0.5 * pi * pi * dm * dm - std::exp(-0.25 * s2) * std::cos(pi * (m1 + m2)));
}

std::complex<double> tb_charge_element(int m1, int m2, double sigma) {
    if (!(sigma > 0.0)) throw ArgumentError("tb_charge_element: sigma must be positive");
    const double dm = m1 - m2;
    const double s2 = sigma * sigma;
    return {0.0, pi * dm * std::exp(-pi * pi * dm * dm / s2) / s2};
}

DeviceParams device_with_sigma(double sigma, double e_j, double e_l) {
    DeviceParams p;
    p.e_j = e_j;
    p.e_c = std::pow(sigma, 4) * e_j / 8.0;
    p.e_l = e_l;
    return p;
}

} // namespace fluxlink::device
