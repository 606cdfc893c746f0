#pragma once

#include "fluxlink/basis.hpp"
#include "fluxlink/lattice.hpp"
#include "fluxlink/sparse.hpp"

namespace fluxlink::model {

// three_term: closed-form effective Hamiltonian with fixed coefficients.
// second_order: numerical second-order reduction of the two-body Hamiltonian
// onto the gauge sector, with V kept in the energy denominators.
enum class EffForm { three_term, second_order };

std::string to_string(EffForm f);
EffForm parse_eff_form(const std::string& s);

// g2_mag may be +infinity (magnetic term off).
SparseOperator build_h_qlm(const lattice::LatticeGeometry& g, const GaugeBasis& basis, double g2_elec, double g2_mag);

SparseOperator build_h_imp(const lattice::LatticeGeometry& g, const GaugeBasis& basis, double v, double u, double j);

SparseOperator build_h_eff(const lattice::LatticeGeometry& g, const GaugeBasis& basis, double v, double u, double j,
                           EffForm form = EffForm::second_order);

// Pieces of the two-body Hamiltonian, for scaling checks and sweeps.
SparseOperator build_h_imp_gauss_term(const lattice::LatticeGeometry& g, const GaugeBasis& basis);

// Diagonal signed (or unsigned) Gauss operator of one vertex.
SparseOperator gauss_operator(const lattice::LatticeGeometry& g, const GaugeBasis& basis, int vertex);

// Ring-exchange signs of a plaquette in the given convention: +1 -> S^-, -1 -> S^+.
std::array<int, 4> ring_signs(const lattice::LatticeGeometry& g, Convention c, int plaquette);

// Word obtained by applying a product of S^- (sign +1) / S^+ (sign -1) along
// the given links; returns false when it annihilates the word.
bool apply_ladder_product(Word w, const int* links, const int* signs, int count, Word& out, double& amp);

} // namespace fluxlink::model
