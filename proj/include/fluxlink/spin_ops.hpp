#pragma once

#include <Eigen/Dense>

#include <complex>

namespace fluxlink::model {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;

// Basis ordering {|+1>, |0>, |-1>}: row/column 0 is S^z = +1.
struct SpinOps {
    Mat3 sz;
    Mat3 splus;
    Mat3 sminus;
    Mat3 fourier_f;       // F = (1/sqrt 3) sum xi^{rs} |r><s|
    Mat3 fourier_fprime;  // F' used for the V' variant
    Mat3 zclock;          // diag(1, xi, xi^2)

    static Mat3 x_phase(double phi);  // X(phi)
};

SpinOps spin1_ops();

struct LargeNOps {
    int n_rep = 0;
    Eigen::MatrixXd w;
    Eigen::MatrixXd w_dagger;
    Eigen::MatrixXd e;
};

// Spin-N/2 link operators with W = U / sqrt(N/2 (N/2 + 1)), U -> S^-.
LargeNOps large_n_ops(int n_rep);

} // namespace fluxlink::model
