#include "fluxlink/config.hpp"

#include "fluxlink/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fluxlink::cli {

namespace pt = boost::property_tree;

lattice::LatticeGeometry GeometrySpec::build() const {
    return kind == lattice::Kind::ladder ? lattice::build_ladder(nx, pair_rule)
                                         : lattice::build_square(nx, ny, lattice::Boundary::open, pair_rule);
}

std::string GeometrySpec::text() const {
    return kind == lattice::Kind::ladder ? "ladder:" + std::to_string(nx)
                                         : "square:" + std::to_string(nx) + "x" + std::to_string(ny);
}

GeometrySpec parse_geometry(const std::string& s) {
    GeometrySpec g;
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ArgumentError("geometry must be ladder:<l> or square:<nx>x<ny>");
    const std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
    try {
        if (kind == "ladder") {
            g.kind = lattice::Kind::ladder;
            std::size_t used = 0;
            g.nx = std::stoi(rest, &used);
            if (used != rest.size()) throw ArgumentError("");
            g.ny = 2;
        } else if (kind == "square") {
            g.kind = lattice::Kind::square;
            const auto x = rest.find('x');
            if (x == std::string::npos) throw ArgumentError("");
            std::size_t u1 = 0, u2 = 0;
            g.nx = std::stoi(rest.substr(0, x), &u1);
            g.ny = std::stoi(rest.substr(x + 1), &u2);
            if (u1 != x || u2 != rest.size() - x - 1) throw ArgumentError("");
        } else {
            throw ArgumentError("");
        }
    } catch (const std::exception&) {
        throw ArgumentError("geometry '" + s + "' must be ladder:<l> or square:<nx>x<ny>");
    }
    if (g.nx < 2 || g.ny < 2) throw ArgumentError("geometry '" + s + "' is too small");
    return g;
}

std::vector<double> SweepSpec::points() const {
    if (!grid.empty()) return grid;
    switch (control) {
    case solver::Control::g2_elec: return {fixed.g2_elec};
    case solver::Control::v: return {fixed.v};
    case solver::Control::u: return {fixed.u};
    }
    return {};
}

std::string Units::text() const { return ghz ? "ghz:" + format_double(eaj_ghz) : "eaj"; }

Units parse_units(const std::string& s) {
    Units u;
    if (s == "eaj") return u;
    if (s.rfind("ghz:", 0) == 0) {
        const std::string v = s.substr(4);
        double x = 0.0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !(x > 0.0))
            throw ArgumentError("units: ghz:<value> needs a positive number");
        u.ghz = true;
        u.eaj_ghz = x;
        return u;
    }
    throw ArgumentError("units must be 'eaj' or 'ghz:<value>'");
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string content_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void RunConfig::validate() const {
    network.validate();
    if (device_dim < 20) throw ArgumentError("network.dim must be at least 20");
    const auto& g = sweep.grid;
    if (g.size() > 1) {
        const bool up = g[1] > g[0];
        for (size_t i = 1; i < g.size(); ++i)
            if ((up && !(g[i] > g[i - 1])) || (!up && !(g[i] < g[i - 1])))
                throw ArgumentError("sweep grid must be strictly monotone");
    }
    if (drive.omega_lo >= drive.omega_hi) throw ArgumentError("drive.omega_lo must be below drive.omega_hi");
    if (drive.g2_lo > drive.g2_hi || drive.g2_lo < 0.0) throw ArgumentError("drive g2 bounds are invalid");
    if (drive.omega_points < 3) throw ArgumentError("drive.omega_points must be at least 3");
    readout.fidelity.validate();
    for (const auto& o : sweep.observables)
        if (o != "upsilon" && o != "wilson" && o != "gauss_density")
            throw ArgumentError("unknown observable '" + o + "'");
}

namespace {

// Line of every "section/key" in the text, for error messages.
std::map<std::string, int> key_lines(const std::string& text) {
    std::map<std::string, int> lines;
    std::istringstream is(text);
    std::string line, section;
    int n = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            lines.emplace(section, n);
            continue;
        }
        const auto eq = t.find('=');
        if (eq != std::string::npos) lines.emplace(section + "/" + trim(t.substr(0, eq)), n);
    }
    return lines;
}

class Reader {
public:
    Reader(const pt::ptree& sec, std::string name, const std::map<std::string, int>& lines)
        : sec_(sec), name_(std::move(name)), lines_(lines) {}

    int line(const std::string& key) const {
        const auto it = lines_.find(name_ + "/" + key);
        return it == lines_.end() ? 0 : it->second;
    }

    template <class F>
    void get(const std::string& key, F&& apply) {
        seen_.insert(key);
        const auto it = sec_.find(key);
        if (it == sec_.not_found()) return;
        const std::string v = it->second.get_value<std::string>();
        try {
            apply(v);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(name_ + "." + key + ": " + e.what(), line(key));
        }
    }

    void number(const std::string& key, double& out) {
        get(key, [&](const std::string& v) { out = to_double(v); });
    }
    void integer(const std::string& key, int& out) {
        get(key, [&](const std::string& v) {
            int x = 0;
            const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
            if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ArgumentError("'" + v + "' is not an integer");
            out = x;
        });
    }
    void boolean(const std::string& key, bool& out) {
        get(key, [&](const std::string& v) {
            if (v == "true") out = true;
            else if (v == "false") out = false;
            else throw ArgumentError("'" + v + "' is not true/false");
        });
    }
    void text(const std::string& key, std::string& out) {
        get(key, [&](const std::string& v) { out = v; });
    }

    void finish() const {
        for (const auto& kv : sec_)
            if (!seen_.count(kv.first))
                throw ConfigError("unknown key '" + kv.first + "' in [" + name_ + "]", line(kv.first));
    }

    static double to_double(const std::string& v) {
        double x = 0.0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ArgumentError("'" + v + "' is not a number");
        return x;
    }

private:
    const pt::ptree& sec_;
    std::string name_;
    const std::map<std::string, int>& lines_;
    std::set<std::string> seen_;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        const auto a = cur.find_first_not_of(" \t");
        const auto b = cur.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
    }
    return out;
}

void read_device(Reader& r, device::DeviceParams& d) {
    r.number("e_c", d.e_c);
    r.number("e_j", d.e_j);
    r.number("e_l", d.e_l);
    r.number("phi_off", d.phi_off);
    r.finish();
}

std::string basis_text(model::BasisKind k) { return model::to_string(k); }

} // namespace

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.message(), int(e.line()));
    }
    const auto lines = key_lines(text);
    RunConfig c;

    static const std::set<std::string> sections{"device.link", "device.ancilla", "network", "drive",
                                                "sweep",       "readout",        "output"};
    for (const auto& kv : tree) {
        if (!sections.count(kv.first)) {
            const auto it = lines.find(kv.first);
            const bool is_section = !kv.second.empty() || kv.second.data().empty();
            throw ConfigError(is_section ? "unknown section [" + kv.first + "]"
                                         : "key '" + kv.first + "' outside any section",
                              it == lines.end() ? 0 : it->second);
        }
    }
    auto section = [&](const std::string& name) -> const pt::ptree& {
        static const pt::ptree empty;
        const auto it = tree.find(name);
        return it == tree.not_found() ? empty : it->second;
    };

    // the preset sets the device block; explicit keys then override it
    {
        Reader r(section("network"), "network", lines);
        r.get("preset", [&](const std::string& v) {
            if (v != "strong_coupling" && v != "none") throw ArgumentError("unknown preset '" + v + "'");
            c.preset = v;
        });
        std::optional<double> xi, ecc;
        r.number("e_cl", c.network.e_cl);
        r.get("xi", [&](const std::string& v) { xi = Reader::to_double(v); });
        r.get("e_cc", [&](const std::string& v) { ecc = Reader::to_double(v); });
        if (xi && ecc) throw ConfigError("network: set either xi or e_cc, not both", r.line("xi"));
        if (xi) {
            c.network.xi = xi;
            c.network.e_cc.reset();
        }
        if (ecc) {
            c.network.e_cc = ecc;
            c.network.xi.reset();
        }
        r.integer("dim", c.device_dim);
        r.get("charge_element", [&](const std::string& v) {
            if (v == "exact") c.charge = network::ChargeElement::exact;
            else if (v == "tight_binding") c.charge = network::ChargeElement::tight_binding;
            else throw ArgumentError("charge_element must be exact or tight_binding");
        });
        r.get("units", [&](const std::string& v) { c.units = parse_units(v); });
        r.finish();
    }
    {
        Reader r(section("device.link"), "device.link", lines);
        read_device(r, c.network.link);
        Reader a(section("device.ancilla"), "device.ancilla", lines);
        read_device(a, c.network.ancilla);
    }
    {
        Reader r(section("drive"), "drive", lines);
        r.number("omega_lo", c.drive.omega_lo);
        r.number("omega_hi", c.drive.omega_hi);
        r.number("g2_lo", c.drive.g2_lo);
        r.number("g2_hi", c.drive.g2_hi);
        r.integer("omega_points", c.drive.omega_points);
        r.finish();
    }
    {
        Reader r(section("sweep"), "sweep", lines);
        auto& s = c.sweep;
        r.get("geometry", [&](const std::string& v) {
            const auto rule = c.geometry.pair_rule;
            c.geometry = parse_geometry(v);
            c.geometry.pair_rule = rule;
        });
        r.get("pair_rule", [&](const std::string& v) {
            if (v == "all_sharing") c.geometry.pair_rule = lattice::PairRule::all_sharing;
            else if (v == "perpendicular") c.geometry.pair_rule = lattice::PairRule::perpendicular;
            else throw ArgumentError("pair_rule must be all_sharing or perpendicular");
        });
        r.get("builder", [&](const std::string& v) { s.builder = solver::parse_builder(v); });
        r.get("control", [&](const std::string& v) { s.control = solver::parse_control(v); });
        double start = NAN, stop = NAN;
        int points = 0;
        std::string scale = "linear";
        r.number("start", start);
        r.number("stop", stop);
        r.integer("points", points);
        r.text("scale", scale);
        r.get("values", [&](const std::string& v) {
            for (const auto& x : split_list(v)) s.grid.push_back(Reader::to_double(x));
        });
        if (points > 0) {
            if (!s.grid.empty()) throw ConfigError("sweep: give either values or start/stop/points", r.line("values"));
            if (std::isnan(start) || std::isnan(stop)) throw ConfigError("sweep: points needs start and stop", r.line("points"));
            if (scale != "linear" && scale != "log") throw ConfigError("sweep.scale must be linear or log", r.line("scale"));
            if (scale == "log" && !(start > 0.0 && stop > 0.0))
                throw ConfigError("sweep: log scale needs positive bounds", r.line("scale"));
            for (int i = 0; i < points; ++i) {
                const double t = points == 1 ? 0.0 : double(i) / (points - 1);
                s.grid.push_back(scale == "log" ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                                                : start + t * (stop - start));
            }
        }
        r.get("observables", [&](const std::string& v) { s.observables = split_list(v); });
        r.number("g2_elec", s.fixed.g2_elec);
        r.number("g2_mag_inv", s.fixed.g2_mag_inv);
        r.number("v", s.fixed.v);
        r.number("u", s.fixed.u);
        r.number("j", s.fixed.j);
        r.get("eff_form", [&](const std::string& v) { s.fixed.eff_form = model::parse_eff_form(v); });
        r.get("imp_basis", [&](const std::string& v) { s.imp_basis = model::parse_basis_kind(v); });
        r.number("varphi", s.varphi);
        r.integer("target_plaquette", s.target_plaquette);
        r.get("convention", [&](const std::string& v) {
            if (v == "signed") c.convention = model::Convention::signed_gauss;
            else if (v == "unsigned") c.convention = model::Convention::unsigned_gauss;
            else throw ArgumentError("convention must be signed or unsigned");
        });
        r.get("string_convention", [&](const std::string& v) { c.string_convention = lattice::parse_convention(v); });
        r.finish();
    }
    {
        Reader r(section("readout"), "readout", lines);
        auto& f = c.readout.fidelity;
        r.number("gamma", f.gamma);
        r.number("chi", f.chi);
        r.number("kappa", f.kappa);
        r.number("eta_a", f.eta_a);
        r.number("eta_p", f.eta_p);
        r.integer("n", f.n);
        r.number("epsilon", f.epsilon);
        r.number("chi_a", f.chi_a);
        r.number("theta", c.readout.theta);
        r.number("omega", c.readout.omega);
        r.get("method", [&](const std::string& v) { c.readout.method = readout::parse_method(v); });
        r.finish();
    }
    {
        Reader r(section("output"), "output", lines);
        r.text("dir", c.output.dir);
        r.text("prefix", c.output.prefix);
        r.boolean("svg", c.output.svg);
        r.boolean("log_x", c.output.log_x);
        r.finish();
    }
    try {
        c.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream o;
    auto f = format_double;
    auto dev = [&](const char* name, const device::DeviceParams& d) {
        o << "[" << name << "]\n"
          << "e_c = " << f(d.e_c) << "\ne_j = " << f(d.e_j) << "\ne_l = " << f(d.e_l) << "\nphi_off = " << f(d.phi_off)
          << "\n\n";
    };
    o << "[network]\npreset = " << c.preset << "\ne_cl = " << f(c.network.e_cl) << "\n";
    if (c.network.xi) o << "xi = " << f(*c.network.xi) << "\n";
    if (c.network.e_cc) o << "e_cc = " << f(*c.network.e_cc) << "\n";
    o << "dim = " << c.device_dim << "\ncharge_element = "
      << (c.charge == network::ChargeElement::exact ? "exact" : "tight_binding") << "\nunits = " << c.units.text()
      << "\n\n";
    dev("device.link", c.network.link);
    dev("device.ancilla", c.network.ancilla);
    o << "[drive]\nomega_lo = " << f(c.drive.omega_lo) << "\nomega_hi = " << f(c.drive.omega_hi)
      << "\ng2_lo = " << f(c.drive.g2_lo) << "\ng2_hi = " << f(c.drive.g2_hi)
      << "\nomega_points = " << c.drive.omega_points << "\n\n";
    const auto& s = c.sweep;
    o << "[sweep]\ngeometry = " << c.geometry.text() << "\npair_rule = "
      << (c.geometry.pair_rule == lattice::PairRule::all_sharing ? "all_sharing" : "perpendicular")
      << "\nbuilder = " << solver::to_string(s.builder) << "\ncontrol = " << solver::to_string(s.control) << "\n";
    if (!s.grid.empty()) {
        o << "values = ";
        for (size_t i = 0; i < s.grid.size(); ++i) o << (i ? ", " : "") << f(s.grid[i]);
        o << "\n";
    }
    o << "observables = ";
    for (size_t i = 0; i < s.observables.size(); ++i) o << (i ? ", " : "") << s.observables[i];
    o << "\ng2_elec = " << f(s.fixed.g2_elec) << "\ng2_mag_inv = " << f(s.fixed.g2_mag_inv) << "\nv = " << f(s.fixed.v)
      << "\nu = " << f(s.fixed.u) << "\nj = " << f(s.fixed.j) << "\neff_form = " << model::to_string(s.fixed.eff_form)
      << "\nimp_basis = " << basis_text(s.imp_basis) << "\nvarphi = " << f(s.varphi)
      << "\ntarget_plaquette = " << s.target_plaquette
      << "\nconvention = " << (c.convention == model::Convention::signed_gauss ? "signed" : "unsigned")
      << "\nstring_convention = " << lattice::to_string(c.string_convention) << "\n\n";
    const auto& fp = c.readout.fidelity;
    o << "[readout]\ngamma = " << f(fp.gamma) << "\nchi = " << f(fp.chi) << "\nkappa = " << f(fp.kappa)
      << "\neta_a = " << f(fp.eta_a) << "\neta_p = " << f(fp.eta_p) << "\nn = " << fp.n << "\nepsilon = " << f(fp.epsilon)
      << "\nchi_a = " << f(fp.chi_a) << "\ntheta = " << f(c.readout.theta) << "\nomega = " << f(c.readout.omega)
      << "\nmethod = " << readout::to_string(c.readout.method) << "\n\n";
    o << "[output]\ndir = " << c.output.dir << "\nprefix = " << c.output.prefix
      << "\nsvg = " << (c.output.svg ? "true" : "false") << "\nlog_x = " << (c.output.log_x ? "true" : "false") << "\n";
    return o.str();
}

} // namespace fluxlink::cli
