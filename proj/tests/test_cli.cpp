#include "fluxlink/app.hpp"
#include "fluxlink/config.hpp"
#include "fluxlink/errors.hpp"
#include "fluxlink/plot.hpp"
#include "fluxlink/report.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fluxlink;
using namespace fluxlink::cli;
namespace fs = std::filesystem;

namespace {

std::string file_of(const ReportBundle& b, const std::string& suffix) {
    for (const auto& [name, content] : b.files)
        if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            return content;
    return {};
}

int count(const std::string& s, const std::string& what) {
    int n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}

fs::path scratch_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("fluxlink_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* fig2_config = R"(
[sweep]
geometry = ladder:5
builder = qlm
control = g2_elec
start = 0.01
stop = 10
points = 7
scale = log
g2_mag_inv = 0.0266666666666667
observables = upsilon
)";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("empty config expands the strong-coupling preset") {
    const auto c = parse_config("");
    CHECK(c.preset == "strong_coupling");
    CHECK(c.network.link.e_j == 0.2);
    CHECK(c.network.link.e_c == 0.06);
    CHECK(c.network.link.e_l == 0.003);
    CHECK(c.network.ancilla.e_c == 0.2);
    CHECK(c.network.ancilla.e_l == 0.01);
    CHECK(c.network.e_cc.value() == 0.04);
    CHECK(c.network.e_cl == 0.0002);
    CHECK(c.sweep.points().size() == 1);
    CHECK(c.sweep.points()[0] == c.sweep.fixed.g2_elec);
}

TEST_CASE("unknown keys and sections are errors naming the key") {
    try {
        parse_config("[network]\ne_cl = 0.001\ne_x = 3\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("e_x") != std::string::npos);
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("[nonsense]\na = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sweep]\nbuilder = dmrg\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[network]\nxi = 0.5\ne_cc = 0.04\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sweep]\nvalues = 1, 2\nstart = 0\nstop = 1\npoints = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sweep\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/fluxlink.ini"), ConfigError);
}

TEST_CASE("sweep grids") {
    auto c = parse_config("[sweep]\nvalues = 0.5, 1.5, 2\n");
    CHECK(c.sweep.points() == std::vector<double>{0.5, 1.5, 2.0});
    c = parse_config("[sweep]\nstart = 1\nstop = 100\npoints = 3\nscale = log\n");
    REQUIRE(c.sweep.points().size() == 3);
    CHECK(c.sweep.points()[1] == doctest::Approx(10.0));
    c = parse_config("[sweep]\nstart = 0\nstop = 1\npoints = 5\n");
    CHECK(c.sweep.points()[2] == doctest::Approx(0.5));
}

TEST_CASE("emit and parse round trip") {
    auto c = parse_config(std::string(fig2_config) + "\n[output]\nprefix = fig2\nlog_x = true\n");
    const std::string text = emit_config(c);
    const auto back = parse_config(text);
    CHECK(emit_config(back) == text);
    CHECK(back.sweep.points() == c.sweep.points());
    CHECK(back.output.prefix == "fig2");
    CHECK(content_hash(text) == content_hash(emit_config(back)));
    CHECK(content_hash(text).size() == 16);
    CHECK(content_hash("a") != content_hash("b"));
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(2.0 / 3.0)) == 2.0 / 3.0);
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("units") {
    CHECK_FALSE(parse_units("eaj").ghz);
    const auto u = parse_units("ghz:12.5");
    CHECK(u.ghz);
    CHECK(u.factor() == 12.5);
    CHECK_THROWS(parse_units("ev"));
}

TEST_CASE("csv fields and sweep tables") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    solver::SweepRecord r;
    r.control = 0.5;
    r.e0 = -1.0;
    r.gap = 0.25;
    r.observables = {{"upsilon", 0.75}};
    solver::SweepRecord bad;
    bad.control = 0.6;
    bad.e0 = NAN;
    bad.gap = NAN;
    bad.error = "boom";
    const auto csv = sweep_csv({r, bad}, {"upsilon"}, {});
    CHECK(csv.rfind("control,E0,gap,upsilon\r\n", 0) == 0);
    CHECK(csv.find("0.5,-1,0.25,0.75\r\n") != std::string::npos);
    CHECK(csv.find("nan") != std::string::npos);
    Units ghz{true, 10.0};
    CHECK(sweep_csv({r}, {"upsilon"}, ghz).find("5,-10,2.5,0.75") != std::string::npos);
}

TEST_CASE("svg plots") {
    PlotOptions po;
    po.config_hash = "abc";
    const auto two = svg_line_plot({0.0, 1.0}, {0.2, 0.8}, po);
    const auto pts = two.substr(two.find("points=\""));
    CHECK(count(pts.substr(0, pts.find("\"/>")), ",") == 2);
    CHECK(two.find("abc") != std::string::npos);
    CHECK(svg_line_plot({1.0}, {2.0}, po).empty());
    CHECK(svg_line_plot({1.0, 2.0, 3.0}, {NAN, 2.0, INFINITY}, po).empty());
    po.y_range = std::pair{0.0, 1.05};
    const auto clamped = svg_line_plot({0.0, 1.0}, {0.0, 1.0}, po);
    CHECK(clamped.find(">1.05<") != std::string::npos);
    CHECK_THROWS_AS(svg_line_plot({1.0}, {1.0, 2.0}, po), ArgumentError);
}

TEST_CASE("couplings command equals derive_couplings") {
    const auto cfg = parse_config("");
    const auto b = run(Command::couplings, cfg);
    const auto j = nlohmann::json::parse(file_of(b, "_couplings.json"));
    const auto c = network::derive_couplings(cfg.network);
    CHECK(j["U"].get<double>() == c.u);
    CHECK(j["V"].get<double>() == c.v);
    CHECK(j["J"].get<double>() == c.j);
    CHECK(j["Delta"].get<double>() == c.delta);
    CHECK(j["g2_elec_times_g2_mag"].get<double>() == c.product);
    CHECK(j.contains("drive"));
    const auto& terms = j["drive"]["stark_terms"];
    REQUIRE(terms.is_array());
    CHECK(!terms.empty());
    for (const auto& t : terms) CHECK(t["level"].get<int>() >= 3);
}

TEST_CASE("fig-2 style sweep: monotone upsilon and byte determinism") {
    const auto cfg = parse_config(fig2_config);
    const auto a = run(Command::sweep, cfg);
    const auto csv = file_of(a, "_sweep.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<double> ups;
    while (std::getline(in, line)) ups.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    REQUIRE(ups.size() == 7);
    for (std::size_t i = 1; i < ups.size(); ++i) CHECK(ups[i] > ups[i - 1]);
    CHECK(ups.back() > 0.99);
    CHECK(!file_of(a, "_upsilon.svg").empty());
    CHECK(file_of(a, "_upsilon.svg").find(">1.05<") != std::string::npos);

    const auto b = run(Command::sweep, cfg);
    CHECK(file_of(b, "_sweep.csv") == csv);
    CHECK(file_of(b, "_upsilon.svg") == file_of(a, "_upsilon.svg"));
    RunOptions par;
    par.parallel = true;
    CHECK(file_of(run(Command::sweep, cfg, par), "_sweep.csv").size() == csv.size());
}

TEST_CASE("single-point sweep gives a notice and no plot") {
    const auto b = run(Command::sweep, parse_config("[sweep]\ngeometry = ladder:3\n"));
    CHECK(file_of(b, ".svg").empty());
    CHECK_FALSE(b.notices.empty());
}

TEST_CASE("other commands produce their files") {
    const auto cfg = parse_config("[sweep]\ngeometry = ladder:3\ng2_elec = 2\n");
    CHECK(!file_of(run(Command::device_spectrum, cfg), "_spectrum.csv").empty());
    CHECK(!file_of(run(Command::dump_geometry, cfg), "_geometry.json").empty());
    const auto obs = run(Command::observe, cfg);
    CHECK(!file_of(obs, "_observe.json").empty());
    CHECK(file_of(obs, "_state.flx").rfind("FLX1", 0) == 0);
    const auto fid = nlohmann::json::parse(file_of(run(Command::readout_fidelity, cfg), "_fidelity.json"));
    CHECK(fid["geometric_wilson"].get<double>() > 0.87);
    const auto prot = nlohmann::json::parse(file_of(run(Command::protocol_sim, cfg), "_protocol.json"));
    CHECK(std::abs(prot["wilson"]["protocol"]["re"].get<double>() - prot["wilson"]["direct"]["re"].get<double>()) < 1e-6);
}

TEST_CASE("bundles are written atomically with metadata") {
    const auto dir = scratch_dir("bundle");
    const auto b = run(Command::readout_fidelity, parse_config("[output]\nprefix = t\n"));
    write_bundle(b, dir, "t");
    CHECK(fs::exists(dir / "t_fidelity.json"));
    CHECK(fs::exists(dir / "t_meta.json"));
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
    std::ifstream in(dir / "t_meta.json");
    const auto meta = nlohmann::json::parse(in);
    CHECK(meta["config_hash"].get<std::string>().size() == 16);
    CHECK(meta["command"] == "readout-fidelity");
}

TEST_CASE("command names") {
    CHECK(parse_command("protocol-sim") == Command::protocol_sim);
    CHECK(to_string(Command::dump_geometry) == "dump-geometry");
    CHECK_THROWS_AS(parse_command("fit"), ArgumentError);
}

TEST_CASE("command-line binary exit codes") {
    const auto dir = scratch_dir("exe");
    const std::string exe = FLUXLINK_CLI;
    const auto ok = std::system((exe + " dump-geometry --out " + dir.string() + " > /dev/null").c_str());
    CHECK(WEXITSTATUS(ok) == 0);
    CHECK(fs::exists(dir / "run_geometry.json"));
    std::ofstream(dir / "bad.ini") << "[network]\nbogus = 1\n";
    const auto bad = std::system((exe + " couplings --config " + (dir / "bad.ini").string() + " 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(bad) == 2);
}

}
