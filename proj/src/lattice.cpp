#include "fluxlink/lattice.hpp"

#include "fluxlink/errors.hpp"

#include <sstream>

namespace fluxlink::lattice {

int LatticeGeometry::vertex_at(int x, int y) const {
    if (boundary == Boundary::periodic) {
        x = ((x % nx) + nx) % nx;
        y = ((y % ny) + ny) % ny;
    }
    if (x < 0 || x >= nx || y < 0 || y >= ny) return -1;
    return y * nx + x;
}

int LatticeGeometry::star_sign(int vertex, int link) const {
    for (const auto& e : vertex_star.at(vertex))
        if (e.link == link) return e.sign;
    return 0;
}

std::string LatticeGeometry::describe() const {
    std::ostringstream os;
    if (kind == Kind::ladder) os << "ladder:" << nx;
    else os << "square:" << nx << "x" << ny << ":" << (boundary == Boundary::open ? "open" : "periodic");
    return os.str();
}

namespace {

void add_link(LatticeGeometry& g, int tail, int head, LinkDir dir) {
    const int idx = g.n_links();
    g.links.push_back({tail, head, dir});
    (dir == LinkDir::x ? g.xlink_at : g.ylink_at)[tail] = idx;
}

void finish(LatticeGeometry& g) {
    g.vertex_star.assign(g.n_vertices(), {});
    for (int k = 0; k < g.n_links(); ++k) {
        g.vertex_star[g.links[k].head].push_back({k, +1});
        g.vertex_star[g.links[k].tail].push_back({k, -1});
    }
    // plaquettes: bottom (+), right (+), top (-), left (-)
    for (int v = 0; v < g.n_vertices(); ++v) {
        const int x = g.vertex_xy[v][0];
        const int y = g.vertex_xy[v][1];
        const int right = g.vertex_at(x + 1, y);
        const int up = g.vertex_at(x, y + 1);
        if (right < 0 || up < 0) continue;
        const int b = g.xlink_at[v];
        const int r = g.ylink_at[right];
        const int t = g.xlink_at[up];
        const int l = g.ylink_at[v];
        if (b < 0 || r < 0 || t < 0 || l < 0) continue;
        g.plaquettes.push_back({PlaquetteEntry{b, +1}, PlaquetteEntry{r, +1}, PlaquetteEntry{t, -1},
                                PlaquetteEntry{l, -1}});
        g.plaquette_xy.push_back({x, y});
    }
    for (int v = 0; v < g.n_vertices(); ++v) {
        const auto& s = g.vertex_star[v];
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j) {
                const int a = std::min(s[i].link, s[j].link);
                const int b = std::max(s[i].link, s[j].link);
                if (g.pair_rule == PairRule::perpendicular && g.links[a].dir == g.links[b].dir) continue;
                g.nn_pairs.push_back({a, b, v});
            }
    }
}

} // namespace

LatticeGeometry build_ladder(int l, PairRule rule) {
    if (l < 2) throw ArgumentError("build_ladder: need at least 2 rungs");
    LatticeGeometry g;
    g.kind = Kind::ladder;
    g.nx = l;
    g.ny = 2;
    g.pair_rule = rule;
    g.vertex_xy.resize(2 * l);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < l; ++x) g.vertex_xy[y * l + x] = {x, y};
    g.xlink_at.assign(2 * l, -1);
    g.ylink_at.assign(2 * l, -1);
    // column-wise order: rung_i, bottom_i, top_i
    for (int i = 0; i < l; ++i) {
        add_link(g, g.vertex_at(i, 0), g.vertex_at(i, 1), LinkDir::y);
        if (i + 1 < l) {
            add_link(g, g.vertex_at(i, 0), g.vertex_at(i + 1, 0), LinkDir::x);
            add_link(g, g.vertex_at(i, 1), g.vertex_at(i + 1, 1), LinkDir::x);
        }
    }
    finish(g);
    return g;
}

LatticeGeometry build_square(int nx, int ny, Boundary boundary, PairRule rule) {
    if (nx < 2 || ny < 2) throw ArgumentError("build_square: need nx, ny >= 2");
    LatticeGeometry g;
    g.kind = Kind::square;
    g.nx = nx;
    g.ny = ny;
    g.boundary = boundary;
    g.pair_rule = rule;
    g.vertex_xy.resize(nx * ny);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) g.vertex_xy[y * nx + x] = {x, y};
    g.xlink_at.assign(nx * ny, -1);
    g.ylink_at.assign(nx * ny, -1);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            const int v = g.vertex_at(x, y);
            const int r = g.vertex_at(x + 1, y);
            const int u = g.vertex_at(x, y + 1);
            if (r >= 0) add_link(g, v, r, LinkDir::x);
            if (u >= 0) add_link(g, v, u, LinkDir::y);
        }
    finish(g);
    return g;
}

int middle_plaquette(const LatticeGeometry& g) {
    if (g.plaquettes.empty()) throw ArgumentError("middle_plaquette: geometry has no plaquettes");
    if (g.kind == Kind::ladder) return (g.nx - 1) / 2;
    return int(g.plaquettes.size()) / 2;
}

Path thooft_path(const LatticeGeometry& g, int target, StringConvention convention) {
    if (target < 0 || target >= int(g.plaquettes.size()))
        throw ArgumentError("thooft_path: invalid plaquette index " + std::to_string(target));
    const int px = g.plaquette_xy[target][0];
    const int py = g.plaquette_xy[target][1];
    Path p;
    p.kind = PathKind::thooft_string;
    for (int x = 0; x <= px; ++x) {
        const int link = g.ylink_at[g.vertex_at(x, py)];
        const int n = int(p.entries.size());
        const int sign = convention == StringConvention::uniform ? 1 : (n % 2 == 0 ? -1 : 1);
        p.entries.push_back({link, sign});
    }
    return p;
}

Path wilson_path(const LatticeGeometry& g, int corner, int width, int height) {
    if (width <= 0 || height <= 0) throw ArgumentError("wilson_path: width and height must be positive");
    if (corner < 0 || corner >= g.n_vertices()) throw ArgumentError("wilson_path: invalid corner vertex");
    const int x0 = g.vertex_xy[corner][0];
    const int y0 = g.vertex_xy[corner][1];
    if (width > g.nx - 1 || height > g.ny - 1 ||
        (g.boundary == Boundary::open && (x0 + width > g.nx - 1 || y0 + height > g.ny - 1)))
        throw ArgumentError("wilson_path: rectangle does not fit in the lattice");
    Path p;
    p.kind = PathKind::wilson_loop;
    auto xl = [&](int x, int y) { return g.xlink_at[g.vertex_at(x, y)]; };
    auto yl = [&](int x, int y) { return g.ylink_at[g.vertex_at(x, y)]; };
    for (int i = 0; i < width; ++i) p.entries.push_back({xl(x0 + i, y0), +1});
    for (int j = 0; j < height; ++j) p.entries.push_back({yl(x0 + width, y0 + j), +1});
    for (int i = width - 1; i >= 0; --i) p.entries.push_back({xl(x0 + i, y0 + height), -1});
    for (int j = height - 1; j >= 0; --j) p.entries.push_back({yl(x0, y0 + j), -1});
    for (const auto& e : p.entries)
        if (e.link < 0) throw ArgumentError("wilson_path: rectangle leaves the lattice");
    return p;
}

bool path_is_closed(const LatticeGeometry& g, const Path& p) {
    if (p.entries.empty()) return false;
    auto ends = [&](const PathEntry& e) {
        const auto& l = g.links.at(e.link);
        return e.sign > 0 ? std::pair{l.tail, l.head} : std::pair{l.head, l.tail};
    };
    const int start = ends(p.entries.front()).first;
    int at = start;
    for (const auto& e : p.entries) {
        const auto [from, to] = ends(e);
        if (from != at) return false;
        at = to;
    }
    return at == start;
}

nlohmann::json to_json(const LatticeGeometry& g) {
    using nlohmann::json;
    json j;
    j["kind"] = g.kind == Kind::ladder ? "ladder" : "square";
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["boundary"] = g.boundary == Boundary::open ? "open" : "periodic";
    j["pair_rule"] = g.pair_rule == PairRule::all_sharing ? "all_sharing" : "perpendicular";
    json links = json::array();
    for (int k = 0; k < g.n_links(); ++k) {
        const auto& l = g.links[k];
        links.push_back({{"index", k}, {"tail", l.tail}, {"head", l.head}, {"dir", l.dir == LinkDir::x ? "x" : "y"}});
    }
    j["links"] = links;
    json verts = json::array();
    for (int v = 0; v < g.n_vertices(); ++v) {
        json star = json::array();
        for (const auto& e : g.vertex_star[v]) star.push_back({e.link, e.sign});
        verts.push_back({{"index", v}, {"x", g.vertex_xy[v][0]}, {"y", g.vertex_xy[v][1]}, {"star", star}});
    }
    j["vertices"] = verts;
    json plaq = json::array();
    for (const auto& p : g.plaquettes) {
        json t = json::array();
        for (const auto& e : p) t.push_back({e.link, e.sign});
        plaq.push_back(t);
    }
    j["plaquettes"] = plaq;
    json pairs = json::array();
    for (const auto& p : g.nn_pairs) pairs.push_back({p.a, p.b, p.vertex});
    j["nn_pairs"] = pairs;
    return j;
}

StringConvention parse_convention(const std::string& s) {
    if (s == "uniform") return StringConvention::uniform;
    if (s == "alternating") return StringConvention::alternating;
    throw ArgumentError("unknown string convention '" + s + "'");
}

std::string to_string(StringConvention c) { return c == StringConvention::uniform ? "uniform" : "alternating"; }

} // namespace fluxlink::lattice
