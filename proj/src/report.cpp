#include "fluxlink/report.hpp"

#include "fluxlink/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fluxlink::cli {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string sweep_csv(const std::vector<solver::SweepRecord>& rows, const std::vector<std::string>& observables,
                      const Units& units) {
    std::ostringstream o;
    const double f = units.factor();
    o << "control,E0,gap";
    for (const auto& name : observables) o << "," << csv_field(name);
    o << "\r\n";
    for (const auto& r : rows) {
        o << format_double(r.control * f) << "," << format_double(r.e0 * f) << "," << format_double(r.gap * f);
        for (const auto& name : observables) {
            double v = NAN;
            for (const auto& [k, x] : r.observables)
                if (k == name) v = x;
            o << "," << format_double(v);
        }
        o << "\r\n";
    }
    return o.str();
}

nlohmann::json couplings_json(const network::CouplingSet& c, const Units& units) {
    const double f = units.factor();
    auto num = [](double x) -> nlohmann::json {
        if (std::isfinite(x)) return x;
        return format_double(x);
    };
    return {{"unit", units.ghz ? "GHz" : "E_J^a"},
            {"Delta", num(c.delta * f)},
            {"U", num(c.u * f)},
            {"V", num(c.v * f)},
            {"J", num(c.j * f)},
            {"J_over_U", num(c.u != 0.0 ? c.j / c.u : NAN)},
            {"g2_elec", num(c.g2_elec * f)},
            {"g2_mag_inv", num(c.g2_mag_inv * f)},
            {"g2_elec_times_g2_mag", num(c.product)},
            {"E_cC", num(c.e_cc * f)},
            {"doublet_splitting", num(c.doublet_splitting * f)},
            {"phi_plus", c.phi_plus},
            {"phi_ge", c.phi_ge},
            {"n_plus_zero", {c.n_plus_zero.real(), c.n_plus_zero.imag()}},
            {"gauss_constraint_absent", c.gauss_constraint_absent},
            {"charge_source", c.charge_source}};
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

void write_bundle(const ReportBundle& b, const std::filesystem::path& dir, const std::string& prefix) {
    for (const auto& [name, content] : b.files) atomic_write(dir / name, content);
    atomic_write(dir / (prefix + "_meta.json"), b.metadata.dump(2) + "\n");
}

} // namespace fluxlink::cli
