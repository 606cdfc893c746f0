#include "fluxlink/spin_ops.hpp"

#include "fluxlink/errors.hpp"

#include <cmath>
#include <numbers>

namespace fluxlink::model {

namespace {
const cplx xi_root = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
}

Mat3 SpinOps::x_phase(double phi) {
    Mat3 x = Mat3::Zero();
    x(0, 1) = 1.0;
    x(1, 2) = 1.0;
    x(2, 0) = std::polar(1.0, phi);
    return x;
}

SpinOps spin1_ops() {
    SpinOps s;
    s.sz = Mat3::Zero();
    s.sz(0, 0) = 1.0;
    s.sz(2, 2) = -1.0;
    s.splus = Mat3::Zero();
    s.splus(0, 1) = std::sqrt(2.0);
    s.splus(1, 2) = std::sqrt(2.0);
    s.sminus = s.splus.adjoint();
    const double r3 = 1.0 / std::sqrt(3.0);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) s.fourier_f(r, c) = r3 * std::pow(xi_root, r * c);
    const cplx x1 = xi_root;
    const cplx x2 = xi_root * xi_root;
    s.fourier_fprime << 1.0, x1, x2, -1.0, -x2, -x1, 1.0, 1.0, 1.0;
    s.fourier_fprime *= r3;
    s.zclock = Mat3::Zero();
    s.zclock(0, 0) = 1.0;
    s.zclock(1, 1) = x1;
    s.zclock(2, 2) = x2;
    return s;
}

LargeNOps large_n_ops(int n_rep) {
    if (n_rep < 1) throw ArgumentError("large_n_ops: n_rep must be at least 1");
    const int d = n_rep + 1;
    const double s = 0.5 * n_rep;
    LargeNOps o;
    o.n_rep = n_rep;
    o.e = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd sminus = Eigen::MatrixXd::Zero(d, d);
    // state k has m = s - k
    for (int k = 0; k < d; ++k) o.e(k, k) = s - k;
    for (int k = 0; k + 1 < d; ++k) {
        const double m = s - k;
        sminus(k + 1, k) = std::sqrt(s * (s + 1) - m * (m - 1));
    }
    const double norm = std::sqrt(s * (s + 1));
    o.w = sminus / norm;
    o.w_dagger = o.w.transpose();
    return o;
}

} // namespace fluxlink::model
