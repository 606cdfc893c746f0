#include "fluxlink/observe.hpp"

#include "fluxlink/errors.hpp"
#include "fluxlink/hamiltonians.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>

namespace fluxlink::observe {

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw NumericError("cannot normalize a zero state");
    for (auto& a : amp) a /= n;
}

void StateVector::validate(double tol) const {
    if (!basis) throw ArgumentError("state vector has no basis");
    if (amp.size() != basis->size()) throw ArgumentError("state vector size does not match its basis");
    if (std::abs(norm() - 1.0) > tol) throw ArgumentError("state vector is not normalized");
}

StateVector basis_state(const model::GaugeBasis& b, model::Word w) {
    const long long i = b.index_of(w);
    if (i < 0) throw ArgumentError("basis_state: word not in basis");
    StateVector s{&b, std::vector<cplx>(b.size(), 0.0)};
    s.amp[i] = 1.0;
    return s;
}

StateVector random_state(const model::GaugeBasis& b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    StateVector s{&b, std::vector<cplx>(b.size())};
    for (auto& a : s.amp) a = cplx(nd(rng), nd(rng));
    s.normalize();
    return s;
}

lattice::Path with_convention(const lattice::Path& p, lattice::StringConvention c) {
    lattice::Path out = p;
    for (size_t i = 0; i < out.entries.size(); ++i)
        out.entries[i].sign = c == lattice::StringConvention::uniform ? 1 : (i % 2 == 0 ? -1 : 1);
    return out;
}

cplx expect_thooft(const StateVector& psi, const lattice::Path& path, double varphi) {
    psi.validate();
    for (const auto& e : path.entries)
        if (e.link < 0 || e.link >= psi.basis->n_links()) throw ArgumentError("expect_thooft: path outside the basis");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
        const double p = std::norm(psi.amp[i]);
        if (p == 0.0) continue;
        const model::Word w = psi.basis->word(i);
        int q = 0;
        for (const auto& e : path.entries) q += e.sign * model::flux(w, e.link);
        acc += p * std::polar(1.0, varphi * q);
    }
    return acc;
}

cplx expect_thooft(const StateVector& psi, const lattice::Path& path, double varphi,
                   lattice::StringConvention convention) {
    return expect_thooft(psi, with_convention(path, convention), varphi);
}

std::vector<int> loop_signs(const lattice::LatticeGeometry& g, model::Convention c, const lattice::Path& loop) {
    if (!lattice::path_is_closed(g, loop)) throw ArgumentError("loop operator needs a closed path");
    std::vector<int> s;
    for (size_t i = 0; i < loop.entries.size(); ++i)
        s.push_back(c == model::Convention::signed_gauss ? loop.entries[i].sign : (i % 2 == 0 ? 1 : -1));
    return s;
}

cplx expect_wilson(const StateVector& psi, const lattice::LatticeGeometry& g, const lattice::Path& loop) {
    psi.validate();
    const auto signs = loop_signs(g, psi.basis->convention(), loop);
    std::vector<int> links;
    for (const auto& e : loop.entries) links.push_back(e.link);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
        if (psi.amp[i] == 0.0) continue;
        model::Word out;
        double amp;
        if (!model::apply_ladder_product(psi.basis->word(i), links.data(), signs.data(), int(links.size()), out, amp))
            continue;
        const long long j = psi.basis->index_of(out);
        if (j < 0) continue;
        acc += std::conj(psi.amp[j]) * amp * psi.amp[i];
    }
    return acc;
}

namespace {

int level_index(int m) { return 1 - m; }

void expand(model::Word w, const std::vector<int>& links, const std::vector<model::Mat3>& ops, size_t pos, cplx amp,
            const StateVector& psi, cplx& acc, cplx ket) {
    if (pos == links.size()) {
        const long long j = psi.basis->index_of(w);
        if (j >= 0) acc += std::conj(psi.amp[j]) * amp * ket;
        return;
    }
    const int col = level_index(model::flux(w, links[pos]));
    for (int row = 0; row < 3; ++row) {
        const cplx e = ops[pos](row, col);
        if (e == 0.0) continue;
        expand(model::with_flux(w, links[pos], 1 - row), links, ops, pos + 1, amp * e, psi, acc, ket);
    }
}

} // namespace

cplx expect_product(const StateVector& psi, const std::vector<int>& links, const std::vector<model::Mat3>& ops) {
    psi.validate();
    if (links.size() != ops.size()) throw ArgumentError("expect_product: one operator per link");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
        if (psi.amp[i] == 0.0) continue;
        expand(psi.basis->word(i), links, ops, 0, 1.0, psi, acc, psi.amp[i]);
    }
    return acc;
}

std::vector<model::Mat3> v_operators(const std::vector<int>& signs, bool primed) {
    std::vector<model::Mat3> ops;
    for (size_t i = 0; i < signs.size(); ++i) {
        const double phase = (primed && i == 0) ? 3.141592653589793 : 0.0;
        const model::Mat3 x = model::SpinOps::x_phase(phase);
        // S^- links take X^dag, S^+ links take X
        ops.push_back(signs[i] > 0 ? model::Mat3(x.adjoint()) : x);
    }
    return ops;
}

cplx expect_v(const StateVector& psi, const lattice::LatticeGeometry& g, const lattice::Path& loop, bool primed) {
    const auto signs = loop_signs(g, psi.basis->convention(), loop);
    std::vector<int> links;
    for (const auto& e : loop.entries) links.push_back(e.link);
    return expect_product(psi, links, v_operators(signs, primed));
}

double gauss_density(const StateVector& psi, const lattice::LatticeGeometry& g) {
    psi.validate();
    if (psi.basis->kind() == model::BasisKind::gauge_sector)
        throw ArgumentError("gauss_density: gauge-sector states satisfy Gauss' law identically");
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
        const double p = std::norm(psi.amp[i]);
        if (p == 0.0) continue;
        double s = 0.0;
        for (int v : model::gauss_values(g, psi.basis->convention(), psi.basis->word(i))) s += double(v) * v;
        acc += p * s;
    }
    return acc / g.n_vertices();
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw ArgumentError("state dump truncated");
    return v;
}

} // namespace

void write_state(std::ostream& os, const std::vector<cplx>& amp) {
    os.write("FLX1", 4);
    put_le<std::uint64_t>(os, amp.size());
    for (const auto& a : amp) {
        put_le<double>(os, a.real());
        put_le<double>(os, a.imag());
    }
}

std::vector<cplx> read_state(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "FLX1", 4) != 0) throw ArgumentError("state dump: bad magic");
    const auto n = get_le<std::uint64_t>(is);
    std::vector<cplx> amp(n);
    for (auto& a : amp) {
        const double re = get_le<double>(is);
        const double im = get_le<double>(is);
        a = cplx(re, im);
    }
    return amp;
}

} // namespace fluxlink::observe
