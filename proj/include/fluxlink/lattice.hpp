#pragma once

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace fluxlink::lattice {

enum class Kind { ladder, square };
enum class Boundary { open, periodic };
enum class LinkDir { x, y };
enum class PairRule { all_sharing, perpendicular };

struct Link {
    int tail = 0;  // link points tail -> head, along +x or +y
    int head = 0;
    LinkDir dir = LinkDir::x;
};

// sign: +1 when the link enters the vertex, -1 when it leaves
struct StarEntry {
    int link = 0;
    int sign = 0;
};

// sign: +1 when traversal follows the link orientation
struct PlaquetteEntry {
    int link = 0;
    int sign = 0;
};

struct NNPair {
    int a = 0;
    int b = 0;
    int vertex = 0;  // shared vertex
};

struct LatticeGeometry {
    Kind kind = Kind::ladder;
    int nx = 0;
    int ny = 0;
    Boundary boundary = Boundary::open;
    PairRule pair_rule = PairRule::all_sharing;
    std::vector<Link> links;
    std::vector<std::array<int, 2>> vertex_xy;
    std::vector<std::vector<StarEntry>> vertex_star;
    std::vector<std::array<PlaquetteEntry, 4>> plaquettes;
    std::vector<NNPair> nn_pairs;
    std::vector<std::array<int, 2>> plaquette_xy;  // lower-left corner
    std::vector<int> xlink_at;  // by vertex index, -1 when absent
    std::vector<int> ylink_at;

    int n_links() const { return int(links.size()); }
    int n_vertices() const { return int(vertex_xy.size()); }
    int vertex_at(int x, int y) const;
    int star_sign(int vertex, int link) const;
    // Ladder length in rungs (nx for both kinds).
    int rungs() const { return nx; }
    std::string describe() const;
};

enum class PathKind { wilson_loop, thooft_string };
enum class StringConvention { uniform, alternating };

struct PathEntry {
    int link = 0;
    int sign = 0;
};

struct Path {
    std::vector<PathEntry> entries;
    PathKind kind = PathKind::wilson_loop;
    int size() const { return int(entries.size()); }
};

LatticeGeometry build_ladder(int l, PairRule rule = PairRule::all_sharing);
LatticeGeometry build_square(int nx, int ny, Boundary boundary, PairRule rule = PairRule::all_sharing);

// Index of the middle plaquette of a ladder: floor((l-1)/2).
int middle_plaquette(const LatticeGeometry& g);

Path thooft_path(const LatticeGeometry& g, int target_plaquette,
                 StringConvention convention = StringConvention::alternating);
Path wilson_path(const LatticeGeometry& g, int corner, int width, int height);

bool path_is_closed(const LatticeGeometry& g, const Path& p);

nlohmann::json to_json(const LatticeGeometry& g);

StringConvention parse_convention(const std::string& s);
std::string to_string(StringConvention c);

} // namespace fluxlink::lattice
