#include "fluxlink/basis.hpp"

#include "fluxlink/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace fluxlink::model {

namespace {

const std::array<Word, max_links + 1> pow3_table = [] {
    std::array<Word, max_links + 1> t{};
    t[0] = 1;
    for (int k = 1; k <= max_links; ++k) t[k] = t[k - 1] * 3;
    return t;
}();

} // namespace

std::string to_string(BasisKind k) {
    switch (k) {
    case BasisKind::full: return "full";
    case BasisKind::gauge_sector: return "gauge_sector";
    case BasisKind::charge_sector: return "charge_sector";
    case BasisKind::gauss_truncated: return "gauss_truncated";
    }
    return "unknown";
}

BasisKind parse_basis_kind(const std::string& s) {
    if (s == "full") return BasisKind::full;
    if (s == "gauge_sector") return BasisKind::gauge_sector;
    if (s == "charge_sector") return BasisKind::charge_sector;
    if (s == "gauss_truncated") return BasisKind::gauss_truncated;
    throw ArgumentError("unknown basis kind '" + s + "'");
}

Word pow3(int k) { return pow3_table.at(k); }

int digit(Word w, int k) { return int((w / pow3_table[k]) % 3); }

Word with_flux(Word w, int k, int m) {
    const int d = digit(w, k);
    return w + Word(m + 1 - d) * pow3_table[k];  // unsigned wraparound handles negative steps
}

void decode(Word w, int n_links, std::int8_t* m) {
    for (int k = 0; k < n_links; ++k) {
        m[k] = std::int8_t(int(w % 3) - 1);
        w /= 3;
    }
}

Word encode(const std::int8_t* m, int n_links) {
    Word w = 0;
    for (int k = n_links - 1; k >= 0; --k) w = w * 3 + Word(m[k] + 1);
    return w;
}

int gauss_coeff(const lattice::LatticeGeometry& g, Convention c, int vertex, int link) {
    const int s = g.star_sign(vertex, link);
    if (s == 0) return 0;
    return c == Convention::signed_gauss ? s : 1;
}

std::vector<int> link_stagger(const lattice::LatticeGeometry& g) {
    auto color = [&](int v) { return (g.vertex_xy[v][0] + g.vertex_xy[v][1]) % 2; };
    std::vector<int> f(g.n_links());
    for (int k = 0; k < g.n_links(); ++k) {
        const auto& l = g.links[k];
        if (color(l.tail) == color(l.head))
            throw ArgumentError("link_stagger: geometry is not bipartite (" + g.describe() + ")");
        // even endpoint: outgoing at tail (-1) or incoming at head (+1)
        f[k] = color(l.tail) == 0 ? -1 : +1;
    }
    return f;
}

std::vector<int> charge_weights(const lattice::LatticeGeometry& g, Convention c) {
    if (c == Convention::unsigned_gauss) return std::vector<int>(g.n_links(), 1);
    return link_stagger(g);
}

double full_space_size(int n_links) { return std::pow(3.0, n_links); }

std::vector<int> gauss_values(const lattice::LatticeGeometry& g, Convention c, Word w) {
    std::vector<int> out(g.n_vertices(), 0);
    for (int v = 0; v < g.n_vertices(); ++v)
        for (const auto& e : g.vertex_star[v])
            out[v] += (c == Convention::signed_gauss ? e.sign : 1) * flux(w, e.link);
    return out;
}

namespace {

struct Enumerator {
    const lattice::LatticeGeometry& g;
    BasisKind kind;
    BasisOptions opt;
    int n;
    std::vector<std::array<std::pair<int, int>, 2>> ends;  // (vertex, coeff) per link
    std::vector<int> q;
    std::vector<int> gv;
    std::vector<int> rem;
    int charge = 0;
    long long lb = 0;
    std::vector<std::int8_t> m;
    std::vector<Word> out;

    Enumerator(const lattice::LatticeGeometry& geo, BasisKind k, const BasisOptions& o)
        : g(geo), kind(k), opt(o), n(geo.n_links()) {
        ends.resize(n);
        for (int k2 = 0; k2 < n; ++k2) {
            const auto& l = g.links[k2];
            ends[k2][0] = {l.head, gauss_coeff(g, o.convention, l.head, k2)};
            ends[k2][1] = {l.tail, gauss_coeff(g, o.convention, l.tail, k2)};
        }
        const bool need_q = kind == BasisKind::charge_sector || (kind == BasisKind::gauss_truncated && o.charge_zero);
        q = need_q ? charge_weights(g, o.convention) : std::vector<int>(n, 0);
        gv.assign(g.n_vertices(), 0);
        rem.resize(g.n_vertices());
        for (int v = 0; v < g.n_vertices(); ++v) rem[v] = int(g.vertex_star[v].size());
        m.assign(n, 0);
    }

    static long long excess(int gval, int r) {
        const long long e = std::max(0, std::abs(gval) - r);
        return e * e;
    }

    void run(int k) {
        if (k == n) {
            if (out.size() >= opt.max_states) {
                std::ostringstream os;
                os << "gauge_basis: more than " << opt.max_states << " states for " << g.describe() << " ("
                   << to_string(kind) << ")";
                throw CapacityError(os.str());
            }
            out.push_back(encode(m.data(), n));
            return;
        }
        const int remaining_after = n - k - 1;
        for (int val = -1; val <= 1; ++val) {
            m[k] = std::int8_t(val);
            const long long lb_old = lb;
            bool ok = true;
            for (const auto& [v, c] : ends[k]) {
                lb -= excess(gv[v], rem[v]);
                gv[v] += c * val;
                --rem[v];
                lb += excess(gv[v], rem[v]);
                if (kind == BasisKind::gauge_sector && std::abs(gv[v]) > rem[v]) ok = false;
            }
            charge += q[k] * val;
            if (kind == BasisKind::gauss_truncated && lb > opt.gauss_cap) ok = false;
            if (std::abs(charge) > remaining_after) {
                bool need = kind == BasisKind::charge_sector || (kind == BasisKind::gauss_truncated && opt.charge_zero);
                if (need) ok = false;
            }
            if (ok) run(k + 1);
            charge -= q[k] * val;
            for (const auto& [v, c] : ends[k]) {
                gv[v] -= c * val;
                ++rem[v];
            }
            lb = lb_old;
        }
        m[k] = 0;
    }
};

} // namespace

GaugeBasis::GaugeBasis(const lattice::LatticeGeometry& g, BasisKind kind, const BasisOptions& opt)
    : kind_(kind), opt_(opt), n_links_(g.n_links()) {
    if (n_links_ > max_links) throw CapacityError("gauge_basis: more than 40 links cannot be encoded");
    if (kind == BasisKind::full) {
        const double size = full_space_size(n_links_);
        if (size > double(opt.max_states)) {
            std::ostringstream os;
            os << "gauge_basis: full space of " << n_links_ << " links has " << size << " states, above the budget "
               << opt.max_states;
            throw CapacityError(os.str());
        }
        full_size_ = std::size_t(size);
        return;
    }
    Enumerator e(g, kind, opt);
    e.run(0);
    words_ = std::move(e.out);
    std::sort(words_.begin(), words_.end());
}

long long GaugeBasis::index_of(Word w) const {
    if (kind_ == BasisKind::full) return w < full_size_ ? (long long)w : -1;
    auto it = std::lower_bound(words_.begin(), words_.end(), w);
    if (it == words_.end() || *it != w) return -1;
    return it - words_.begin();
}

} // namespace fluxlink::model
