#pragma once

#include "fluxlink/basis.hpp"
#include "fluxlink/lattice.hpp"
#include "fluxlink/spin_ops.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fluxlink::observe {

using model::cplx;

struct StateVector {
    const model::GaugeBasis* basis = nullptr;
    std::vector<cplx> amp;

    double norm() const;
    void normalize();
    // Throws unless the state is normalized within tol and matches its basis.
    void validate(double tol = 1e-10) const;
};

StateVector basis_state(const model::GaugeBasis& b, model::Word w);
StateVector random_state(const model::GaugeBasis& b, std::uint64_t seed);

// Re-signs a string path for the requested convention.
lattice::Path with_convention(const lattice::Path& p, lattice::StringConvention c);

// <prod_k exp(i varphi sign_k S^z_k)>, signs taken from the path.
cplx expect_thooft(const StateVector& psi, const lattice::Path& path, double varphi);
cplx expect_thooft(const StateVector& psi, const lattice::Path& path, double varphi,
                   lattice::StringConvention convention);

// Per-link operator signs of a closed loop: +1 -> S^-, -1 -> S^+.
std::vector<int> loop_signs(const lattice::LatticeGeometry& g, model::Convention c, const lattice::Path& loop);

cplx expect_wilson(const StateVector& psi, const lattice::LatticeGeometry& g, const lattice::Path& loop);

// Expectation of a tensor product of single-link 3x3 operators (basis {+1,0,-1}).
cplx expect_product(const StateVector& psi, const std::vector<int>& links, const std::vector<model::Mat3>& ops);

// Unitary loop operators: V puts X (or X^dag) on every loop link; V' swaps the
// first factor for X(pi) (or its adjoint).
std::vector<model::Mat3> v_operators(const std::vector<int>& signs, bool primed);
cplx expect_v(const StateVector& psi, const lattice::LatticeGeometry& g, const lattice::Path& loop, bool primed);

// (1/N_v) sum_v <G_v^2>; rejects gauge-sector states.
double gauss_density(const StateVector& psi, const lattice::LatticeGeometry& g);

// Binary dump: "FLX1", u64 dimension, little-endian (re, im) doubles.
void write_state(std::ostream& os, const std::vector<cplx>& amp);
std::vector<cplx> read_state(std::istream& is);

} // namespace fluxlink::observe
