#include "fluxlink/app.hpp"

#include "fluxlink/errors.hpp"
#include "fluxlink/observe.hpp"
#include "fluxlink/plot.hpp"
#include "fluxlink/readout.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fluxlink::cli {

namespace {

constexpr const char* version = "1.0.0";

struct CommandName {
    Command cmd;
    const char* name;
};

constexpr CommandName command_names[] = {
    {Command::device_spectrum, "device-spectrum"},   {Command::couplings, "couplings"},
    {Command::sweep, "sweep"},                       {Command::observe, "observe"},
    {Command::readout_fidelity, "readout-fidelity"}, {Command::protocol_sim, "protocol-sim"},
    {Command::dump_geometry, "dump-geometry"},
};

nlohmann::json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json level_json(const device::Spectrum& s, double f, int count) {
    nlohmann::json levels = nlohmann::json::array();
    for (int i = 0; i < std::min<int>(count, int(s.energies.size())); ++i) levels.push_back(s.energies[i] * f);
    return {{"levels", levels}, {"beta", s.beta}, {"converged", s.converged},
            {"convergence_delta", s.convergence_delta * f}, {"dim", s.dim}};
}

solver::SweepOptions sweep_options(const RunConfig& cfg, const RunOptions& opt) {
    solver::SweepOptions so;
    so.parallel = opt.parallel;
    so.basis.convention = cfg.convention;
    so.imp_basis = cfg.sweep.imp_basis;
    return so;
}

std::vector<solver::ObservableSpec> observable_specs(const RunConfig& cfg) {
    std::vector<solver::ObservableSpec> v;
    for (const auto& name : cfg.sweep.observables) {
        solver::ObservableSpec o;
        o.name = name;
        o.varphi = cfg.sweep.varphi;
        o.convention = cfg.string_convention;
        o.target_plaquette = cfg.sweep.target_plaquette;
        v.push_back(o);
    }
    return v;
}

std::string control_label(solver::Control c) {
    switch (c) {
    case solver::Control::g2_elec: return "g2_elec";
    case solver::Control::v: return "V";
    case solver::Control::u: return "U";
    }
    return "control";
}

struct Ground {
    std::unique_ptr<model::GaugeBasis> basis;
    solver::EigResult eig;
};

Ground ground_state(const RunConfig& cfg, const lattice::LatticeGeometry& g, double value) {
    solver::SweepOptions so;
    so.basis.convention = cfg.convention;
    so.imp_basis = cfg.sweep.imp_basis;
    Ground out;
    out.basis = std::make_unique<model::GaugeBasis>(g, solver::basis_for(cfg.sweep.builder, so), so.basis);
    const auto h = solver::build(cfg.sweep.builder, g, *out.basis, cfg.sweep.control, value, cfg.sweep.fixed);
    solver::LanczosOptions lo;
    lo.k = out.basis->size() > 1 ? 2 : 1;
    out.eig = solver::lanczos_ground(h, lo);
    return out;
}

int target_of(const RunConfig& cfg, const lattice::LatticeGeometry& g) {
    return cfg.sweep.target_plaquette < 0 ? lattice::middle_plaquette(g) : cfg.sweep.target_plaquette;
}

lattice::Path plaquette_loop(const lattice::LatticeGeometry& g, int p) {
    const auto& xy = g.plaquette_xy.at(p);
    return lattice::wilson_path(g, g.vertex_at(xy[0], xy[1]), 1, 1);
}

void run_device_spectrum(const RunConfig& cfg, ReportBundle& b) {
    const double f = cfg.units.factor();
    const auto link = device::spectrum(network::shifted_link(cfg.network), cfg.device_dim);
    const auto anc = device::spectrum(network::shifted_ancilla(cfg.network), cfg.device_dim);
    b.metadata["link"] = level_json(link, f, 10);
    b.metadata["ancilla"] = level_json(anc, f, 10);
    std::ostringstream csv;
    csv << "level,link,ancilla\r\n";
    for (int i = 0; i < 10; ++i)
        csv << i << "," << format_double(link.energies[i] * f) << "," << format_double(anc.energies[i] * f) << "\r\n";
    b.files.push_back({cfg.output.prefix + "_spectrum.csv", csv.str()});
    if (!link.converged) b.notices.push_back("link spectrum not converged at dim " + std::to_string(cfg.device_dim));
    if (!anc.converged) b.notices.push_back("ancilla spectrum not converged at dim " + std::to_string(cfg.device_dim));
}

void run_couplings(const RunConfig& cfg, ReportBundle& b) {
    const auto cs = network::derive_couplings(cfg.network, cfg.device_dim, cfg.charge);
    nlohmann::json j = couplings_json(cs, cfg.units);
    try {
        const auto link = network::shifted_link(cfg.network);
        const auto s = device::spectrum(link, cfg.device_dim);
        const auto q = device::qutrit_states(s);
        network::DriveBounds db;
        db.omega_lo = cfg.drive.omega_lo * link.e_j;
        db.omega_hi = cfg.drive.omega_hi * link.e_j;
        db.g2_lo = cfg.drive.g2_lo * link.e_j * link.e_j;
        db.g2_hi = cfg.drive.g2_hi * link.e_j * link.e_j;
        db.omega_points = cfg.drive.omega_points;
        const auto opt = network::optimize_drive(q, s, db);
        const double f = cfg.units.factor();
        const double prod = cs.g2_mag_inv > 0.0 ? (opt.stark.v_eff + cs.g2_mag_inv) / cs.g2_mag_inv : NAN;
        j["drive"] = {{"omega_f_over_e_j", opt.drive.omega_f / link.e_j},
                      {"g2_over_e_j2", std::pow(opt.drive.g_strength / link.e_j, 2)},
                      {"V_eff", opt.stark.v_eff * f},
                      {"g2_elec_times_g2_mag", std::isfinite(prod) ? nlohmann::json(prod) : nlohmann::json("nan")},
                      {"evaluations", opt.evaluations}};
        // per-level breakdown of the optimum's Stark shifts
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : opt.stark.terms)
            terms.push_back({{"qutrit", t.qutrit}, {"level", t.level}, {"detuning", t.detuning * f},
                             {"contribution", t.contribution * f}});
        j["drive"]["stark_terms"] = terms;
    } catch (const Error& e) {
        j["drive"] = {{"error", e.what()}};
        b.notices.push_back(std::string("drive: ") + e.what());
    }
    b.files.push_back({cfg.output.prefix + "_couplings.json", j.dump(2) + "\n"});
    b.metadata["couplings"] = j;
}

void run_sweep(const RunConfig& cfg, const RunOptions& opt, ReportBundle& b) {
    const auto g = cfg.geometry.build();
    const auto grid = cfg.sweep.points();
    const auto rows = solver::sweep(cfg.sweep.builder, g, cfg.sweep.control, grid, cfg.sweep.fixed,
                                    observable_specs(cfg), sweep_options(cfg, opt));
    b.files.push_back({cfg.output.prefix + "_sweep.csv", sweep_csv(rows, cfg.sweep.observables, cfg.units)});
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& r : rows) {
        if (!r.error.empty()) errs.push_back({{"control", r.control}, {"module", "solver"}, {"error", r.error}});
        if (r.degenerate) b.notices.push_back("degenerate ground state at control " + format_double(r.control));
    }
    b.metadata["rows"] = rows.size();
    b.metadata["errors"] = errs;
    b.metadata["basis_dim"] = rows.empty() ? 0 : rows.front().dim;
    if (!cfg.output.svg) return;
    if (rows.size() < 2) {
        b.notices.push_back("single-row sweep: no plot written");
        return;
    }
    const std::string hash = content_hash(emit_config(cfg));
    std::vector<double> x;
    for (const auto& r : rows) x.push_back(r.control);
    auto add_plot = [&](const std::string& name, std::vector<double> y, bool clamp) {
        PlotOptions po;
        po.title = name + " (" + solver::to_string(cfg.sweep.builder) + ", " + cfg.geometry.text() + ")";
        po.x_label = control_label(cfg.sweep.control);
        po.y_label = name;
        po.log_x = cfg.output.log_x;
        po.config_hash = hash;
        if (clamp) po.y_range = std::pair{0.0, 1.05};
        const auto svg = svg_line_plot(x, y, po);
        if (svg.empty()) b.notices.push_back("plot '" + name + "': fewer than two finite points, skipped");
        else b.files.push_back({cfg.output.prefix + "_" + name + ".svg", svg});
    };
    for (const auto& name : cfg.sweep.observables) {
        std::vector<double> y;
        for (const auto& r : rows) {
            double v = NAN;
            for (const auto& [k, val] : r.observables)
                if (k == name) v = val;
            y.push_back(v);
        }
        add_plot(name, y, name == "upsilon");
    }
    std::vector<double> gap;
    for (const auto& r : rows) gap.push_back(r.gap);
    add_plot("gap", gap, false);
}

void run_observe(const RunConfig& cfg, ReportBundle& b) {
    const auto g = cfg.geometry.build();
    const double value = cfg.sweep.points().front();
    const auto gs = ground_state(cfg, g, value);
    observe::StateVector psi{gs.basis.get(), gs.eig.vectors[0]};
    const int p = target_of(cfg, g);
    nlohmann::json j;
    j["control"] = value;
    j["E0"] = gs.eig.energies[0] * cfg.units.factor();
    j["gap"] = gs.eig.energies.size() > 1 ? (gs.eig.energies[1] - gs.eig.energies[0]) * cfg.units.factor() : 0.0;
    j["degenerate"] = gs.eig.degenerate_ground;
    j["basis"] = gs.basis->tag();
    j["dim"] = gs.basis->size();
    j["target_plaquette"] = p;
    for (auto conv : {lattice::StringConvention::uniform, lattice::StringConvention::alternating}) {
        const auto path = lattice::thooft_path(g, p, conv);
        j["upsilon"][lattice::to_string(conv)] = complex_json(observe::expect_thooft(psi, path, cfg.sweep.varphi));
    }
    j["wilson"] = complex_json(observe::expect_wilson(psi, g, plaquette_loop(g, p)));
    if (gs.basis->kind() != model::BasisKind::gauge_sector) j["gauss_density"] = observe::gauss_density(psi, g);
    b.metadata["observe"] = j;
    b.files.push_back({cfg.output.prefix + "_observe.json", j.dump(2) + "\n"});
    std::ostringstream bin;
    observe::write_state(bin, psi.amp);
    b.files.push_back({cfg.output.prefix + "_state.flx", bin.str()});
}

void run_readout_fidelity(const RunConfig& cfg, ReportBundle& b) {
    const auto& fp = cfg.readout.fidelity;
    const double pi = std::numbers::pi;
    nlohmann::json j;
    j["params"] = {{"gamma", fp.gamma}, {"chi", fp.chi},     {"kappa", fp.kappa},     {"eta_a", fp.eta_a},
                   {"eta_p", fp.eta_p}, {"n", fp.n},         {"epsilon", fp.epsilon}, {"theta", cfg.readout.theta},
                   {"omega", cfg.readout.omega}};
    j["geometric"] = readout::fidelity_gp(fp, cfg.readout.theta, cfg.readout.omega);
    j["geometric_wilson"] = readout::fidelity_gp(fp, 2.0 * pi / 3.0, pi / std::sqrt(3.0));
    j["geometric_thooft"] = readout::fidelity_gp(fp, pi / 2.0, pi / 2.0);
    j["single_photon"] = readout::fidelity_sp(fp, cfg.readout.theta);
    j["single_photon_penalty_per_spin"] = readout::sp_penalty(fp, cfg.readout.theta);
    j["mean_gate_time"] = readout::mean_gate_time(cfg.readout.theta, fp.chi, fp.kappa);
    const auto inh = readout::inhomogeneity_error(cfg.readout.theta, fp.n, fp.epsilon);
    j["inhomogeneity"] = {{"exact_bound", inh.exact_bound}, {"small_eps", inh.small_eps}};
    b.metadata["fidelity"] = j;
    b.files.push_back({cfg.output.prefix + "_fidelity.json", j.dump(2) + "\n"});
}

void run_protocol_sim(const RunConfig& cfg, ReportBundle& b) {
    const auto g = cfg.geometry.build();
    const double value = cfg.sweep.points().front();
    const auto gs = ground_state(cfg, g, value);
    observe::StateVector psi{gs.basis.get(), gs.eig.vectors[0]};
    const int p = target_of(cfg, g);
    readout::ProtocolOptions po;
    po.method = cfg.readout.method;
    po.repeat = true;
    po.transcript = true;
    nlohmann::json j;
    const auto loop = plaquette_loop(g, p);
    const auto w = readout::wilson_protocol(psi, g, loop, po);
    j["wilson"] = {{"protocol", complex_json(w.value)},
                   {"direct", complex_json(observe::expect_wilson(psi, g, loop))},
                   {"V", complex_json(w.v)},
                   {"V_prime", complex_json(w.v_prime)},
                   {"sigma_x", w.run_v.polarization.real()},
                   {"sigma_x_repeated", w.run_v.repeat_sigma_x},
                   {"vacuum_population", w.run_v.vacuum_population}};
    const auto path = lattice::thooft_path(g, p, cfg.string_convention);
    const double varphi = po.method == readout::Method::geometric ? std::numbers::pi : cfg.sweep.varphi;
    const auto t = readout::thooft_protocol(psi, path, varphi, po);
    j["upsilon"] = {{"protocol", complex_json(t.value)},
                    {"direct", complex_json(observe::expect_thooft(psi, path, varphi))},
                    {"varphi", varphi},
                    {"sigma_x_repeated", t.run_v.repeat_sigma_x}};
    j["method"] = readout::to_string(po.method);
    b.metadata["protocol"] = j;
    b.files.push_back({cfg.output.prefix + "_protocol.json", j.dump(2) + "\n"});
    nlohmann::json tr = w.transcript;
    for (const auto& e : t.transcript) tr.push_back(e);
    b.files.push_back({cfg.output.prefix + "_transcript.json", tr.dump(2) + "\n"});
}

void run_dump_geometry(const RunConfig& cfg, ReportBundle& b) {
    const auto g = cfg.geometry.build();
    b.files.push_back({cfg.output.prefix + "_geometry.json", lattice::to_json(g).dump(2) + "\n"});
}

} // namespace

std::string to_string(Command c) {
    for (const auto& n : command_names)
        if (n.cmd == c) return n.name;
    return "?";
}

Command parse_command(const std::string& s) {
    for (const auto& n : command_names)
        if (s == n.name) return n.cmd;
    throw ArgumentError("unknown subcommand '" + s + "'");
}

ReportBundle run(Command cmd, const RunConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    ReportBundle b;
    const auto t0 = std::chrono::steady_clock::now();
    const std::string config_text = emit_config(cfg);
    b.metadata["version"] = version;
    b.metadata["command"] = to_string(cmd);
    b.metadata["config"] = config_text;
    b.metadata["config_hash"] = content_hash(config_text);
    b.metadata["units"] = cfg.units.text();
    switch (cmd) {
    case Command::device_spectrum: run_device_spectrum(cfg, b); break;
    case Command::couplings: run_couplings(cfg, b); break;
    case Command::sweep: run_sweep(cfg, opt, b); break;
    case Command::observe: run_observe(cfg, b); break;
    case Command::readout_fidelity: run_readout_fidelity(cfg, b); break;
    case Command::protocol_sim: run_protocol_sim(cfg, b); break;
    case Command::dump_geometry: run_dump_geometry(cfg, b); break;
    }
    b.metadata["notices"] = b.notices;
    b.metadata["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return b;
}

} // namespace fluxlink::cli
