#include "fluxlink/errors.hpp"
#include "fluxlink/lattice.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace fluxlink;
using namespace fluxlink::lattice;

namespace {

struct Counts {
    int links = 0;
    int vertices = 0;
    int plaquettes = 0;
};

// Open nx x ny grid: count unit edges and unit squares directly.
Counts grid_counts(int nx, int ny) {
    Counts c;
    c.vertices = nx * ny;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            if (x + 1 < nx) ++c.links;
            if (y + 1 < ny) ++c.links;
            if (x + 1 < nx && y + 1 < ny) ++c.plaquettes;
        }
    return c;
}

void check_invariants(const LatticeGeometry& g) {
    // every link appears in exactly two stars, once entering and once leaving
    std::map<int, std::pair<int, int>> seen;
    for (int v = 0; v < g.n_vertices(); ++v)
        for (const auto& e : g.vertex_star[v]) {
            CHECK(g.star_sign(v, e.link) == e.sign);
            if (e.sign > 0) {
                ++seen[e.link].first;
                CHECK(g.links[e.link].head == v);
            } else {
                ++seen[e.link].second;
                CHECK(g.links[e.link].tail == v);
            }
        }
    CHECK(int(seen.size()) == g.n_links());
    for (const auto& [l, c] : seen) CHECK(c == std::pair{1, 1});
    for (const auto& p : g.plaquettes) {
        Path path;
        for (const auto& e : p) path.entries.push_back({e.link, e.sign});
        CHECK(path_is_closed(g, path));
    }
    for (const auto& nn : g.nn_pairs) {
        CHECK(nn.a < nn.b);
        CHECK(g.star_sign(nn.vertex, nn.a) != 0);
        CHECK(g.star_sign(nn.vertex, nn.b) != 0);
    }
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("ladder sizes") {
    CHECK(build_ladder(29).n_links() == 85);
    const auto l2 = build_ladder(2);
    CHECK(l2.n_links() == 4);
    CHECK(l2.plaquettes.size() == 1);
    const auto l5 = build_ladder(5);
    const auto c = grid_counts(5, 2);
    CHECK(l5.n_links() == c.links);
    CHECK(l5.n_vertices() == c.vertices);
    CHECK(int(l5.plaquettes.size()) == c.plaquettes);
    CHECK(l5.n_links() == 13);
    CHECK(l5.n_vertices() == 10);
    CHECK(l5.plaquettes.size() == 4);
    for (int l = 2; l <= 12; ++l) {
        CHECK(build_ladder(l).n_links() == 3 * l - 2);
        CHECK(build_ladder(l).n_vertices() == 2 * l);
    }
    CHECK_THROWS_AS(build_ladder(1), ArgumentError);
}

TEST_CASE("square sizes") {
    const auto a = build_square(2, 2, Boundary::open);
    CHECK(a.n_vertices() == 4);
    CHECK(a.n_links() == 4);
    CHECK(a.plaquettes.size() == 1);
    const auto p = build_square(3, 3, Boundary::periodic);
    CHECK(p.n_links() == 18);
    CHECK(p.n_vertices() == 9);
    CHECK(p.plaquettes.size() == 9);
    const auto b = build_square(3, 2, Boundary::open);
    CHECK(b.n_links() == grid_counts(3, 2).links);
    CHECK(b.n_links() == 7);
    CHECK(b.plaquettes.size() == 2);
    CHECK_THROWS_AS(build_square(1, 3, Boundary::open), ArgumentError);
}

TEST_CASE("geometry invariants") {
    for (int l : {2, 3, 5, 8}) check_invariants(build_ladder(l));
    check_invariants(build_square(3, 3, Boundary::open));
    check_invariants(build_square(3, 3, Boundary::periodic));
    check_invariants(build_square(4, 3, Boundary::periodic));
}

TEST_CASE("pair rules") {
    const auto all = build_ladder(4);
    const auto perp = build_ladder(4, PairRule::perpendicular);
    CHECK(perp.nn_pairs.size() < all.nn_pairs.size());
    for (const auto& nn : perp.nn_pairs) CHECK(perp.links[nn.a].dir != perp.links[nn.b].dir);
    // every pair of star entries at each vertex
    std::size_t expect = 0;
    for (const auto& s : all.vertex_star) expect += s.size() * (s.size() - 1) / 2;
    CHECK(all.nn_pairs.size() == expect);
}

TEST_CASE("'t Hooft strings") {
    const auto g29 = build_ladder(29);
    const auto s = thooft_path(g29, middle_plaquette(g29));
    CHECK(s.size() == 15);
    std::set<int> rungs;
    for (const auto& e : s.entries) {
        CHECK(g29.links[e.link].dir == LinkDir::y);
        rungs.insert(e.link);
    }
    CHECK(rungs.size() == 15);
    CHECK(thooft_path(build_ladder(2), 0).size() == 1);
    CHECK(thooft_path(build_ladder(6), 0).size() == 1);
    CHECK_THROWS_AS(thooft_path(build_ladder(3), 2), ArgumentError);

    const auto u = thooft_path(g29, 14, StringConvention::uniform);
    const auto a = thooft_path(g29, 14, StringConvention::alternating);
    for (int i = 0; i < u.size(); ++i) {
        CHECK(u.entries[i].sign == 1);
        CHECK(a.entries[i].sign == (i % 2 == 0 ? -1 : 1));
        CHECK(a.entries[i].link == u.entries[i].link);
    }
}

TEST_CASE("Wilson paths") {
    const auto g = build_ladder(4);
    const auto p = wilson_path(g, 0, 1, 1);
    CHECK(p.size() == 4);
    CHECK(path_is_closed(g, p));
    std::set<int> a, b;
    for (const auto& e : p.entries) a.insert(e.link);
    for (const auto& e : g.plaquettes[0]) b.insert(e.link);
    CHECK(a == b);
    const auto r = wilson_path(g, 0, 2, 1);
    CHECK(r.size() == 6);
    CHECK(path_is_closed(g, r));
    CHECK_THROWS_AS(wilson_path(g, 0, 0, 1), ArgumentError);
    CHECK_THROWS_AS(wilson_path(g, 0, 1, 2), ArgumentError);
    CHECK_THROWS_AS(wilson_path(g, 3, 1, 1), ArgumentError);
    Path open = r;
    open.entries.pop_back();
    CHECK_FALSE(path_is_closed(g, open));
}

TEST_CASE("periodic Wilson paths wrap") {
    const auto g = build_square(3, 3, Boundary::periodic);
    const auto p = wilson_path(g, g.vertex_at(2, 2), 1, 1);
    CHECK(path_is_closed(g, p));
}

TEST_CASE("geometry JSON") {
    const auto j = to_json(build_ladder(3));
    CHECK(j["kind"] == "ladder");
    CHECK(j["links"].size() == 7);
    CHECK(j["vertices"].size() == 6);
    CHECK(j["plaquettes"].size() == 2);
}

TEST_CASE("string convention names") {
    CHECK(parse_convention("uniform") == StringConvention::uniform);
    CHECK(to_string(StringConvention::alternating) == "alternating");
    CHECK_THROWS_AS(parse_convention("zigzag"), ArgumentError);
}

}
