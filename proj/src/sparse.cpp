#include "fluxlink/sparse.hpp"

#include "fluxlink/errors.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <random>

namespace fluxlink::model {

SparseOperator::SparseOperator(std::size_t dim, std::vector<Triplet> t, std::string basis_tag, bool hermitian)
    : dim_(dim), tag_(std::move(basis_tag)), hermitian_(hermitian) {
    if (dim > std::size_t(INT32_MAX)) throw CapacityError("sparse operator dimension exceeds 32-bit columns");
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(dim + 1, 0);
    col_.reserve(t.size());
    val_.reserve(t.size());
    std::int64_t last_r = -1, last_c = -1;
    for (const auto& e : t) {
        if (e.row < 0 || e.col < 0 || std::size_t(e.row) >= dim || std::size_t(e.col) >= dim)
            throw ArgumentError("sparse operator: entry outside the matrix");
        if (e.row == last_r && e.col == last_c) {
            val_.back() += e.value;
            continue;
        }
        col_.push_back(std::int32_t(e.col));
        val_.push_back(e.value);
        ++row_ptr_[e.row + 1];
        last_r = e.row;
        last_c = e.col;
    }
    for (std::size_t r = 0; r < dim; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

void SparseOperator::apply(const cplx* x, cplx* y) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx acc = 0.0;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += val_[p] * x[col_[p]];
        y[r] = acc;
    }
}

std::vector<cplx> SparseOperator::apply(const std::vector<cplx>& x) const {
    if (x.size() != dim_) throw ArgumentError("sparse apply: dimension mismatch");
    std::vector<cplx> y(dim_);
    apply(x.data(), y.data());
    return y;
}

cplx SparseOperator::element(std::size_t r, std::size_t c) const {
    const auto b = col_.begin() + row_ptr_[r];
    const auto e = col_.begin() + row_ptr_[r + 1];
    auto it = std::lower_bound(b, e, std::int32_t(c));
    if (it == e || *it != std::int32_t(c)) return 0.0;
    return val_[it - col_.begin()];
}

std::vector<cplx> SparseOperator::diagonal() const {
    std::vector<cplx> d(dim_);
    for (std::size_t r = 0; r < dim_; ++r) d[r] = element(r, r);
    return d;
}

double SparseOperator::norm_bound() const {
    double best = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += std::abs(val_[p]);
        best = std::max(best, s);
    }
    return best;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) m(r, col_[p]) = val_[p];
    return m;
}

double SparseOperator::hermiticity_defect(std::size_t samples, std::uint64_t seed) const {
    if (val_.empty()) return 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, val_.size() - 1);
    double worst = 0.0;
    const bool exhaustive = val_.size() <= samples;
    const std::size_t n = exhaustive ? val_.size() : samples;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = exhaustive ? i : pick(rng);
        const auto r = std::upper_bound(row_ptr_.begin(), row_ptr_.end(), std::int64_t(p)) - row_ptr_.begin() - 1;
        const auto c = col_[p];
        worst = std::max(worst, std::abs(val_[p] - std::conj(element(c, r))));
    }
    return worst;
}

SparseOperator SparseOperator::scaled(cplx a) const {
    SparseOperator out = *this;
    for (auto& v : out.val_) v *= a;
    if (a.imag() != 0.0) out.hermitian_ = false;
    return out;
}

SparseOperator SparseOperator::combined(cplx a, const SparseOperator& other, cplx b) const {
    if (other.dim_ != dim_) throw ArgumentError("sparse combine: dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(nnz() + other.nnz());
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            t.push_back({std::int64_t(r), col_[p], a * val_[p]});
        for (std::int64_t p = other.row_ptr_[r]; p < other.row_ptr_[r + 1]; ++p)
            t.push_back({std::int64_t(r), other.col_[p], b * other.val_[p]});
    }
    const bool herm = hermitian_ && other.hermitian_ && a.imag() == 0.0 && b.imag() == 0.0;
    return SparseOperator(dim_, std::move(t), tag_, herm);
}

SparseOperator SparseOperator::commutator(const SparseOperator& o) const {
    if (o.dim_ != dim_) throw ArgumentError("sparse commutator: dimension mismatch");
    std::vector<Triplet> t;
    auto mult = [&](const SparseOperator& x, const SparseOperator& y, double sign) {
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::int64_t p = x.row_ptr_[r]; p < x.row_ptr_[r + 1]; ++p) {
                const auto k = x.col_[p];
                for (std::int64_t q = y.row_ptr_[k]; q < y.row_ptr_[k + 1]; ++q)
                    t.push_back({std::int64_t(r), y.col_[q], sign * x.val_[p] * y.val_[q]});
            }
    };
    mult(*this, o, 1.0);
    mult(o, *this, -1.0);
    return SparseOperator(dim_, std::move(t), tag_, false);
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const auto& v : val_) m = std::max(m, std::abs(v));
    return m;
}

namespace {
void put(std::ostream& os, double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    os.write(buf, r.ptr - buf);
}
} // namespace

void SparseOperator::dump(std::ostream& os) const {
    os << "# dim " << dim_ << " basis " << tag_ << " nnz " << nnz() << "\n";
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::int64_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            os << r << ' ' << col_[p] << ' ';
            put(os, val_[p].real());
            os << ' ';
            put(os, val_[p].imag());
            os << '\n';
        }
}

} // namespace fluxlink::model
