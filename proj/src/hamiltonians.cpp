#include "fluxlink/hamiltonians.hpp"

#include "fluxlink/errors.hpp"

#include <cmath>

namespace fluxlink::model {

std::string to_string(EffForm f) { return f == EffForm::three_term ? "three_term" : "second_order"; }

EffForm parse_eff_form(const std::string& s) {
    if (s == "three_term") return EffForm::three_term;
    if (s == "second_order") return EffForm::second_order;
    throw ArgumentError("unknown effective form '" + s + "'");
}

bool apply_ladder_product(Word w, const int* links, const int* signs, int count, Word& out, double& amp) {
    amp = 1.0;
    out = w;
    for (int i = 0; i < count; ++i) {
        const int m = flux(out, links[i]);
        const int next = m - signs[i];  // sign +1 lowers (S^-), -1 raises (S^+)
        if (next < -1 || next > 1) return false;
        // spin-1 ladder amplitude sqrt(2 - m m') is sqrt(2) for every allowed step
        amp *= std::sqrt(2.0 - double(m) * next);
        out = with_flux(out, links[i], next);
    }
    return true;
}

std::array<int, 4> ring_signs(const lattice::LatticeGeometry& g, Convention c, int plaquette) {
    const auto& p = g.plaquettes.at(plaquette);
    if (c == Convention::unsigned_gauss) return {+1, -1, +1, -1};
    return {p[0].sign, p[1].sign, p[2].sign, p[3].sign};
}

namespace {

void check_basis(const lattice::LatticeGeometry& g, const GaugeBasis& b) {
    if (b.n_links() != g.n_links()) throw ArgumentError("basis and geometry disagree on the number of links");
    if (b.size() == 0) throw ArgumentError("empty basis");
}

double sum_m2(Word w, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const int m = flux(w, k);
        s += m * m;
    }
    return s;
}

double gauss_sq(const lattice::LatticeGeometry& g, Convention c, Word w) {
    double s = 0.0;
    for (int v : gauss_values(g, c, w)) s += double(v) * v;
    return s;
}

// Emits c*(R + R^dag) for the ring exchange of every plaquette.
void add_rings(const lattice::LatticeGeometry& g, const GaugeBasis& b, double coeff, std::vector<Triplet>& t) {
    if (coeff == 0.0) return;
    std::vector<std::array<int, 4>> links(g.plaquettes.size()), signs(g.plaquettes.size());
    for (size_t p = 0; p < g.plaquettes.size(); ++p) {
        signs[p] = ring_signs(g, b.convention(), int(p));
        for (int i = 0; i < 4; ++i) links[p][i] = g.plaquettes[p][i].link;
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Word w = b.word(i);
        for (size_t p = 0; p < links.size(); ++p) {
            Word out;
            double amp;
            if (!apply_ladder_product(w, links[p].data(), signs[p].data(), 4, out, amp)) continue;
            const long long j = b.index_of(out);
            if (j < 0) continue;
            t.push_back({j, std::int64_t(i), coeff * amp});
            t.push_back({std::int64_t(i), j, coeff * amp});
        }
    }
}

struct Hop {
    int a;
    int b;
    int sign_b;  // S^+ on a; S^- on b when sign_b = +1, S^+ when -1
};

// Flip-flop terms that conserve the Gauss value at the shared vertex.
std::vector<Hop> hops(const lattice::LatticeGeometry& g, Convention c) {
    std::vector<Hop> h;
    for (const auto& p : g.nn_pairs) {
        const int ca = gauss_coeff(g, c, p.vertex, p.a);
        const int cb = gauss_coeff(g, c, p.vertex, p.b);
        h.push_back({p.a, p.b, ca * cb});
    }
    return h;
}

// Applies the hop (direction +1) or its adjoint (direction -1).
bool apply_hop(const Hop& h, int direction, Word w, Word& out, double& amp) {
    const int links[2] = {h.a, h.b};
    const int signs[2] = {-direction, h.sign_b * direction};
    return apply_ladder_product(w, links, signs, 2, out, amp);
}

} // namespace

SparseOperator build_h_qlm(const lattice::LatticeGeometry& g, const GaugeBasis& b, double g2_elec, double g2_mag) {
    check_basis(g, b);
    if (g2_mag == 0.0) throw ArgumentError("build_h_qlm: g2_mag must be nonzero");
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = g2_elec * sum_m2(b.word(i), b.n_links());
        if (d != 0.0) t.push_back({std::int64_t(i), std::int64_t(i), d});
    }
    const double inv = std::isinf(g2_mag) ? 0.0 : 1.0 / g2_mag;
    add_rings(g, b, -inv, t);
    return SparseOperator(b.size(), std::move(t), b.tag(), true);
}

SparseOperator build_h_imp(const lattice::LatticeGeometry& g, const GaugeBasis& b, double v, double u, double j) {
    check_basis(g, b);
    const Convention c = b.convention();
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Word w = b.word(i);
        const double d = v * sum_m2(w, b.n_links()) + (u != 0.0 ? u * gauss_sq(g, c, w) : 0.0);
        if (d != 0.0) t.push_back({std::int64_t(i), std::int64_t(i), d});
    }
    if (j != 0.0) {
        const auto hs = hops(g, c);
        for (std::size_t i = 0; i < b.size(); ++i) {
            const Word w = b.word(i);
            for (const auto& h : hs) {
                Word out;
                double amp;
                if (!apply_hop(h, +1, w, out, amp)) continue;
                const long long k = b.index_of(out);
                if (k < 0) continue;
                t.push_back({k, std::int64_t(i), j * amp});
                t.push_back({std::int64_t(i), k, j * amp});
            }
        }
    }
    return SparseOperator(b.size(), std::move(t), b.tag(), true);
}

SparseOperator build_h_imp_gauss_term(const lattice::LatticeGeometry& g, const GaugeBasis& b) {
    return build_h_imp(g, b, 0.0, 1.0, 0.0);
}

namespace {

SparseOperator h_eff_three_term(const lattice::LatticeGeometry& g, const GaugeBasis& b, double v, double u, double j) {
    const Convention c = b.convention();
    const double j2u = j * j / u;
    std::vector<std::pair<int, int>> pair_links;
    std::vector<int> pair_sign;
    for (const auto& p : g.nn_pairs) {
        pair_links.push_back({p.a, p.b});
        pair_sign.push_back(gauss_coeff(g, c, p.vertex, p.a) * gauss_coeff(g, c, p.vertex, p.b));
    }
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Word w = b.word(i);
        double d = (v + 2.0 * j2u) * sum_m2(w, b.n_links());
        for (size_t q = 0; q < pair_links.size(); ++q) {
            const double zz = pair_sign[q] * flux(w, pair_links[q].first) * flux(w, pair_links[q].second);
            d += 0.25 * j2u * zz * (1.0 - zz);
        }
        if (d != 0.0) t.push_back({std::int64_t(i), std::int64_t(i), d});
    }
    add_rings(g, b, -2.0 * j2u, t);
    return SparseOperator(b.size(), std::move(t), b.tag(), true);
}

SparseOperator h_eff_second_order(const lattice::LatticeGeometry& g, const GaugeBasis& b, double v, double u,
                                  double j) {
    if (b.kind() != BasisKind::gauge_sector)
        throw ArgumentError("build_h_eff: the second-order form needs a gauge-sector basis");
    const Convention c = b.convention();
    const auto hs = hops(g, c);
    const int n = b.n_links();
    auto energy = [&](Word w) { return v * sum_m2(w, n) + u * gauss_sq(g, c, w); };

    std::vector<Triplet> t;
    for (std::size_t ia = 0; ia < b.size(); ++ia) {
        const Word a = b.word(ia);
        const double ea = energy(a);
        t.push_back({std::int64_t(ia), std::int64_t(ia), ea});
        for (const auto& h1 : hs)
            for (int d1 : {+1, -1}) {
                Word q;
                double amp1;
                if (!apply_hop(h1, d1, a, q, amp1)) continue;
                const double eq = energy(q);
                if (gauss_sq(g, c, q) == 0.0) {
                    // hop stays inside the sector: first-order term
                    const long long iq = b.index_of(q);
                    if (iq >= std::int64_t(ia)) {
                        t.push_back({iq, std::int64_t(ia), j * amp1});
                        if (iq != std::int64_t(ia)) t.push_back({std::int64_t(ia), iq, j * amp1});
                    }
                    continue;
                }
                for (const auto& h2 : hs)
                    for (int d2 : {+1, -1}) {
                        Word bw;
                        double amp2;
                        if (!apply_hop(h2, d2, q, bw, amp2)) continue;
                        const long long ib = b.index_of(bw);
                        if (ib < std::int64_t(ia)) continue;
                        const double eb = energy(bw);
                        const double val = 0.5 * j * j * amp1 * amp2 * (1.0 / (ea - eq) + 1.0 / (eb - eq));
                        t.push_back({ib, std::int64_t(ia), val});
                        if (ib != std::int64_t(ia)) t.push_back({std::int64_t(ia), ib, val});
                    }
            }
    }
    return SparseOperator(b.size(), std::move(t), b.tag(), true);
}

} // namespace

SparseOperator build_h_eff(const lattice::LatticeGeometry& g, const GaugeBasis& b, double v, double u, double j,
                           EffForm form) {
    check_basis(g, b);
    if (!(u > 0.0)) throw ArgumentError("build_h_eff: u must be positive");
    return form == EffForm::three_term ? h_eff_three_term(g, b, v, u, j) : h_eff_second_order(g, b, v, u, j);
}

SparseOperator gauss_operator(const lattice::LatticeGeometry& g, const GaugeBasis& b, int vertex) {
    check_basis(g, b);
    if (vertex < 0 || vertex >= g.n_vertices()) throw ArgumentError("gauss_operator: invalid vertex");
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < b.size(); ++i) {
        int s = 0;
        for (const auto& e : g.vertex_star[vertex]) s += gauss_coeff(g, b.convention(), vertex, e.link) * flux(b.word(i), e.link);
        if (s != 0) t.push_back({std::int64_t(i), std::int64_t(i), double(s)});
    }
    return SparseOperator(b.size(), std::move(t), b.tag(), true);
}

} // namespace fluxlink::model
