#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fluxlink::model {

using cplx = std::complex<double>;

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    cplx value;
};

// Compressed-row complex matrix. Entries are sorted row-major with
// duplicates summed, so assembly order never changes the result.
class SparseOperator {
public:
    SparseOperator() = default;
    SparseOperator(std::size_t dim, std::vector<Triplet> triplets, std::string basis_tag, bool hermitian);

    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return val_.size(); }
    bool hermitian() const { return hermitian_; }
    const std::string& basis_tag() const { return tag_; }

    void apply(const cplx* x, cplx* y) const;
    std::vector<cplx> apply(const std::vector<cplx>& x) const;
    cplx element(std::size_t r, std::size_t c) const;
    std::vector<cplx> diagonal() const;

    // max absolute row sum, an upper bound on the spectral norm
    double norm_bound() const;
    Eigen::MatrixXcd to_dense() const;
    // Compares sampled (r,c) against conj(c,r); returns the worst mismatch.
    double hermiticity_defect(std::size_t samples = 2000, std::uint64_t seed = 7) const;

    SparseOperator scaled(cplx a) const;
    // this*a + other*b on the same basis
    SparseOperator combined(cplx a, const SparseOperator& other, cplx b) const;
    // A*B - B*A for operators on the same basis
    SparseOperator commutator(const SparseOperator& other) const;
    double max_abs() const;

    // text triplets: header line then "row col re im" per entry
    void dump(std::ostream& os) const;

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int32_t>& cols() const { return col_; }
    const std::vector<cplx>& values() const { return val_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::int64_t> row_ptr_{0};
    std::vector<std::int32_t> col_;
    std::vector<cplx> val_;
    std::string tag_;
    bool hermitian_ = false;
};

} // namespace fluxlink::model
