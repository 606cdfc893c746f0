#include "fluxlink/readout.hpp"

#include "fluxlink/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fluxlink::readout {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double leak_tol = 1e-6;
constexpr double vacuum_tol = 1e-6;

int ipow3(int n) {
    int p = 1;
    for (int i = 0; i < n; ++i) p *= 3;
    return p;
}

int level_of(int s, int j) {
    for (int i = 0; i < j; ++i) s /= 3;
    return s % 3;
}

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

void log_gate(nlohmann::json* log, nlohmann::json gate) {
    if (log) log->push_back(std::move(gate));
}

} // namespace

CavityRegister::CavityRegister(int n_spins, int fock_cut, bool with_ancilla)
    : n_spins_(n_spins), fock_cut_(fock_cut), ancilla_(with_ancilla) {
    if (n_spins < 1 || n_spins > max_spins)
        throw CapacityError("cavity register holds 1.." + std::to_string(max_spins) + " spins");
    if (fock_cut < 2) throw ArgumentError("cavity register needs fock_cut >= 2");
    spin_dim_ = ipow3(n_spins);
    amp_.assign(std::size_t(spin_dim_) * fock_cut_ * anc_dim(), 0.0);
}

void CavityRegister::prepare(const std::vector<cplx>& spins, std::array<cplx, 2> ancilla) {
    if (int(spins.size()) != spin_dim_) throw ArgumentError("prepare: spin vector has the wrong length");
    std::fill(amp_.begin(), amp_.end(), cplx(0.0));
    for (int s = 0; s < spin_dim_; ++s) {
        if (ancilla_) {
            amp_[index(s, 0, 0)] = spins[s] * ancilla[0];
            amp_[index(s, 0, 1)] = spins[s] * ancilla[1];
        } else {
            amp_[index(s, 0, 0)] = spins[s];
        }
    }
}

double CavityRegister::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

double CavityRegister::leakage() const {
    double p = 0.0;
    for (int s = 0; s < spin_dim_; ++s)
        for (int n = std::max(0, fock_cut_ - 2); n < fock_cut_; ++n)
            for (int a = 0; a < anc_dim(); ++a) p += std::norm(amp_[index(s, n, a)]);
    return p;
}

double CavityRegister::vacuum_population() const {
    double p = 0.0;
    for (int s = 0; s < spin_dim_; ++s)
        for (int a = 0; a < anc_dim(); ++a) p += std::norm(amp_[index(s, 0, a)]);
    return p;
}

std::vector<cplx> CavityRegister::spin_slice(int a) const {
    if (a < 0 || a >= anc_dim()) throw ArgumentError("spin_slice: invalid ancilla level");
    std::vector<cplx> v(spin_dim_);
    for (int s = 0; s < spin_dim_; ++s) v[s] = amp_[index(s, 0, a)];
    return v;
}

std::array<double, 2> CavityRegister::ancilla_polarization() const {
    if (!ancilla_) throw ArgumentError("register has no ancilla");
    cplx c = 0.0;
    for (int s = 0; s < spin_dim_; ++s)
        for (int n = 0; n < fock_cut_; ++n) c += std::conj(amp_[index(s, n, 0)]) * amp_[index(s, n, 1)];
    return {2.0 * c.real(), 2.0 * c.imag()};
}

Weights wilson_weights(int n) { return Weights(n, {0, 1, 2}); }
Weights thooft_pi_weights(int n) { return Weights(n, {0, 1, 0}); }

int fock_cut_for(double max_abs_alpha) { return int(std::ceil(9.0 * max_abs_alpha * max_abs_alpha)) + 20; }

Eigen::MatrixXcd displacement_matrix(int fock_cut, cplx alpha) {
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(fock_cut, fock_cut);
    for (int n = 0; n + 1 < fock_cut; ++n) {
        const double s = std::sqrt(double(n + 1));
        gen(n + 1, n) = alpha * s;            // alpha a^dag
        gen(n, n + 1) = -std::conj(alpha) * s;  // -alpha* a
    }
    return gen.exp();
}

void displacement(CavityRegister& reg, cplx alpha, nlohmann::json* log) {
    if (std::norm(alpha) > reg.fock_cut() / 9.0)
        throw ArgumentError("displacement: |alpha|^2 exceeds fock_cut/9");
    log_gate(log, {{"gate", "displacement"}, {"alpha", cjson(alpha)}});
    if (alpha == 0.0) return;
    const Eigen::MatrixXcd d = displacement_matrix(reg.fock_cut(), alpha);
    const int nc = reg.fock_cut();
    const int na = reg.has_ancilla() ? 2 : 1;
    Eigen::VectorXcd in(nc);
    auto& amp = reg.amp();
    for (int s = 0; s < reg.spin_dim(); ++s)
        for (int a = 0; a < na; ++a) {
            for (int n = 0; n < nc; ++n) in(n) = amp[reg.index(s, n, a)];
            const Eigen::VectorXcd out = d * in;
            for (int n = 0; n < nc; ++n) amp[reg.index(s, n, a)] = out(n);
        }
    if (reg.leakage() > leak_tol) throw NumericError("displacement: Fock truncation leakage above 1e-6");
}

namespace {

void diagonal_phase(CavityRegister& reg, double theta, const Weights& w) {
    if (int(w.size()) != reg.n_spins()) throw ArgumentError("dispersive_rotation: one weight triple per spin");
    const int na = reg.has_ancilla() ? 2 : 1;
    auto& amp = reg.amp();
    for (int s = 0; s < reg.spin_dim(); ++s) {
        int o = 0;
        for (int j = 0, t = s; j < reg.n_spins(); ++j, t /= 3) o += w[j][t % 3];
        if (o == 0) continue;
        for (int n = 1; n < reg.fock_cut(); ++n) {
            const cplx ph = std::polar(1.0, theta * n * o);
            for (int a = 0; a < na; ++a) amp[reg.index(s, n, a)] *= ph;
        }
    }
}

Mat3 permutation(int a, int b) {
    Mat3 p = Mat3::Identity();
    p(a, a) = p(b, b) = 0.0;
    p(a, b) = p(b, a) = 1.0;
    return p;
}

} // namespace

void dispersive_rotation(CavityRegister& reg, double theta, const Weights& w, RotationMode mode, nlohmann::json* log) {
    if (mode == RotationMode::direct) {
        log_gate(log, {{"gate", "dispersive_rotation"}, {"theta", theta}});
        diagonal_phase(reg, theta, w);
        return;
    }
    for (const auto& t : w)
        if (t != std::array<int, 3>{0, 1, 2}) throw ArgumentError("two-step rotation supports the Wilson weights only");
    // coupling to |0> only, after swapping level 1 (then level 2) into it
    const Weights w0(reg.n_spins(), {1, 0, 0});
    for (auto [level, angle] : {std::pair{1, theta}, std::pair{2, 2.0 * theta}}) {
        const Mat3 f = permutation(0, level);
        for (int j = 0; j < reg.n_spins(); ++j) spin_gate(reg, j, f);
        log_gate(log, {{"gate", "dispersive_rotation_level0"}, {"theta", angle}, {"permuted_level", level}});
        diagonal_phase(reg, angle, w0);
        for (int j = 0; j < reg.n_spins(); ++j) spin_gate(reg, j, f);
    }
}

void ancilla_rotation(CavityRegister& reg, double theta, nlohmann::json* log) {
    if (!reg.has_ancilla()) throw ArgumentError("ancilla_rotation: register has no ancilla");
    log_gate(log, {{"gate", "ancilla_rotation"}, {"theta", theta}});
    auto& amp = reg.amp();
    for (int s = 0; s < reg.spin_dim(); ++s)
        for (int n = 1; n < reg.fock_cut(); ++n) amp[reg.index(s, n, 1)] *= std::polar(1.0, theta * n);
}

void controlled_displacement(CavityRegister& reg, cplx beta, nlohmann::json* log) {
    ancilla_rotation(reg, -pi, log);
    displacement(reg, -0.5 * beta, log);
    ancilla_rotation(reg, pi, log);
    displacement(reg, 0.5 * beta, log);
}

void spin_gate(CavityRegister& reg, int spin, const Mat3& u, nlohmann::json* log) {
    if (spin < 0 || spin >= reg.n_spins()) throw ArgumentError("spin_gate: invalid spin");
    if (log) log_gate(log, {{"gate", "spin_rotation"}, {"spin", spin}});
    int stride = 1;
    for (int i = 0; i < spin; ++i) stride *= 3;
    const int na = reg.has_ancilla() ? 2 : 1;
    auto& amp = reg.amp();
    for (int s = 0; s < reg.spin_dim(); ++s) {
        if (level_of(s, spin) != 0) continue;
        for (int n = 0; n < reg.fock_cut(); ++n)
            for (int a = 0; a < na; ++a) {
                const cplx x[3] = {amp[reg.index(s, n, a)], amp[reg.index(s + stride, n, a)],
                                   amp[reg.index(s + 2 * stride, n, a)]};
                for (int r = 0; r < 3; ++r)
                    amp[reg.index(s + r * stride, n, a)] = u(r, 0) * x[0] + u(r, 1) * x[1] + u(r, 2) * x[2];
            }
    }
}

std::array<cplx, 2> sequence_amplitudes(double phi, double omega) {
    if (omega < 0.0) throw ArgumentError("geometric sequence: omega must be non-negative");
    const double r = std::sqrt(0.5 * omega);
    return {std::polar(r, phi), cplx(r, 0.0)};
}

void geometric_sequence(CavityRegister& reg, double phi, double theta, double omega, const Weights& w,
                        bool controlled, RotationMode mode, nlohmann::json* log) {
    if (reg.vacuum_population() < (1.0 - vacuum_tol) * std::pow(reg.norm(), 2))
        throw ArgumentError("geometric sequence must start from the cavity vacuum");
    const auto [alpha, beta] = sequence_amplitudes(phi, omega);
    auto disp_beta = [&](cplx b) {
        if (controlled) controlled_displacement(reg, b, log);
        else displacement(reg, b, log);
    };
    displacement(reg, alpha, log);
    dispersive_rotation(reg, theta, w, mode, log);
    disp_beta(beta);
    dispersive_rotation(reg, -theta, w, mode, log);
    displacement(reg, -alpha, log);
    dispersive_rotation(reg, theta, w, mode, log);
    disp_beta(-beta);
    const double n2 = std::pow(reg.norm(), 2);
    if (reg.vacuum_population() < (1.0 - vacuum_tol) * n2)
        throw NumericError("geometric sequence: cavity did not return to the vacuum");
}

std::vector<cplx> geometric_closed_form(double phi, double theta, double omega, const Weights& w) {
    const int n = int(w.size());
    const int dim = ipow3(n);
    std::vector<cplx> d(dim);
    for (int s = 0; s < dim; ++s) {
        int o = 0;
        for (int j = 0, t = s; j < n; ++j, t /= 3) o += w[j][t % 3];
        d[s] = std::polar(1.0, -omega * std::sin(theta * o + phi));
    }
    return d;
}

Frame clock_frame(const Mat3& a) {
    Eigen::ComplexEigenSolver<Mat3> es(a);
    if (es.info() != Eigen::Success) throw NumericError("clock_frame: eigensolver failed");
    const auto& ev = es.eigenvalues();
    for (int i = 0; i < 3; ++i)
        if (!(std::abs(std::abs(ev(i)) - 1.0) < 1e-8)) throw NumericError("clock_frame: operator is not unitary");
    // lambda: the eigenvalue with argument in [0, 2 pi / 3)
    int base = -1;
    for (int i = 0; i < 3; ++i) {
        double arg = std::arg(ev(i));
        if (arg < -1e-12) arg += 2.0 * pi;
        if (arg < 2.0 * pi / 3.0 - 1e-9 && base < 0) base = i;
    }
    if (base < 0) throw NumericError("clock_frame: spectrum is not a clock spectrum");
    Frame f;
    f.lambda = ev(base) / std::abs(ev(base));
    f.r = Mat3::Zero();
    const cplx xi = std::polar(1.0, 2.0 * pi / 3.0);
    for (int k = 0; k < 3; ++k) {
        const cplx want = f.lambda * std::pow(xi, k);
        int best = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(ev(i) - want) < std::abs(ev(best) - want)) best = i;
        if (std::abs(ev(best) - want) > 1e-8) throw NumericError("clock_frame: spectrum is not a clock spectrum");
        const Eigen::Vector3cd v = es.eigenvectors().col(best).normalized();
        f.r.row(k) = v.adjoint();
    }
    return f;
}

std::string to_string(Method m) { return m == Method::geometric ? "geometric" : "single_photon"; }

Method parse_method(const std::string& s) {
    if (s == "geometric") return Method::geometric;
    if (s == "single_photon") return Method::single_photon;
    throw ArgumentError("unknown protocol method '" + s + "'");
}

namespace {

// Loop-register amplitudes for each spectator configuration of the other links.
std::map<model::Word, std::vector<cplx>> split_by_environment(const observe::StateVector& psi,
                                                              const std::vector<int>& links) {
    psi.validate();
    const int n = int(links.size());
    if (n < 1 || n > CavityRegister::max_spins)
        throw CapacityError("protocol register supports 1.." + std::to_string(CavityRegister::max_spins) + " spins");
    for (int l : links)
        if (l < 0 || l >= psi.basis->n_links()) throw ArgumentError("protocol: path outside the basis");
    std::map<model::Word, std::vector<cplx>> env;
    const int dim = ipow3(n);
    for (std::size_t i = 0; i < psi.amp.size(); ++i) {
        if (psi.amp[i] == 0.0) continue;
        model::Word w = psi.basis->word(i);
        int s = 0;
        for (int j = n - 1; j >= 0; --j) {
            s = 3 * s + (1 - model::flux(w, links[j]));
            w = model::with_flux(w, links[j], 0);
        }
        auto& v = env[w];
        if (v.empty()) v.assign(dim, 0.0);
        v[s] += psi.amp[i];
    }
    return env;
}

// One measurement circuit: maps a spin vector to the two ancilla (or
// polarization) branches of the spin register.
struct Circuit {
    std::function<std::array<std::vector<cplx>, 2>(const std::vector<cplx>&, nlohmann::json*, double&)> run;
};

cplx branch_overlap(const std::array<std::vector<cplx>, 2>& b) {
    cplx c = 0.0;
    for (size_t s = 0; s < b[0].size(); ++s) c += std::conj(b[0][s]) * b[1][s];
    return 2.0 * c;
}

RunResult run_circuit(const Circuit& c, const std::map<model::Word, std::vector<cplx>>& env, bool repeat,
                      nlohmann::json* log) {
    RunResult r;
    double norm_in = 0.0, norm_out = 0.0;
    bool first = true;
    for (const auto& [key, spins] : env) {
        for (const auto& a : spins) norm_in += std::norm(a);
        double vac = 1.0;
        const auto br = c.run(spins, first ? log : nullptr, vac);
        first = false;
        for (const auto& v : br)
            for (const auto& a : v) norm_out += std::norm(a);
        r.vacuum_population = std::min(r.vacuum_population, vac);
        r.polarization += branch_overlap(br);
        if (!repeat) continue;
        for (double sgn : {1.0, -1.0}) {
            std::vector<cplx> post(spins.size());
            for (size_t s = 0; s < post.size(); ++s) post[s] = (br[0][s] + sgn * br[1][s]) / std::sqrt(2.0);
            double vac2 = 1.0;
            r.repeat_sigma_x += branch_overlap(c.run(post, nullptr, vac2)).real();
        }
    }
    r.norm_defect = std::abs(norm_out - norm_in);
    return r;
}

Circuit geometric_circuit(const std::vector<Mat3>& frames, double phi, double theta, double omega, const Weights& w,
                          const ProtocolOptions& opt) {
    const int n = int(w.size());
    const auto amps = sequence_amplitudes(phi, omega);
    const int cut = opt.fock_cut > 0 ? opt.fock_cut : fock_cut_for(std::abs(amps[0]) + std::abs(amps[1]));
    Circuit c;
    c.run = [=](const std::vector<cplx>& spins, nlohmann::json* log, double& vac) {
        CavityRegister reg(n, cut, true);
        const double h = 1.0 / std::sqrt(2.0);
        reg.prepare(spins, {h, h});
        const double n0 = reg.norm();
        for (int j = 0; j < n; ++j)
            if (!frames.empty()) spin_gate(reg, j, frames[j], log);
        geometric_sequence(reg, phi, theta, omega, w, true, opt.rotation, log);
        for (int j = 0; j < n; ++j)
            if (!frames.empty()) spin_gate(reg, j, frames[j].adjoint(), log);
        if (n0 > 0.0) {
            if (std::abs(reg.norm() - n0) > 1e-8 * std::max(1.0, n0))
                throw NumericError("protocol: register norm drifted");
            vac = reg.vacuum_population() / (n0 * n0);
        }
        return std::array<std::vector<cplx>, 2>{reg.spin_slice(0), reg.spin_slice(1)};
    };
    return c;
}

// Single photon in (|1>_+ + |1>_-)/sqrt 2; only the - mode couples, so the
// - branch picks up exp(i theta O) while the + branch is untouched.
Circuit single_photon_circuit(const std::vector<Mat3>& frames, double theta, const Weights& w) {
    const int n = int(w.size());
    Circuit c;
    c.run = [=](const std::vector<cplx>& spins, nlohmann::json* log, double& vac) {
        vac = 1.0;
        CavityRegister reg(n, 2, true);  // ancilla slot holds the polarization mode
        const double h = 1.0 / std::sqrt(2.0);
        reg.prepare(spins, {h, h});
        for (int j = 0; j < n; ++j)
            if (!frames.empty()) spin_gate(reg, j, frames[j], log);
        log_gate(log, {{"gate", "single_photon_dispersive"}, {"chi_tau", theta}});
        auto& amp = reg.amp();
        for (int s = 0; s < reg.spin_dim(); ++s) {
            int o = 0;
            for (int j = 0, t = s; j < n; ++j, t /= 3) o += w[j][t % 3];
            amp[reg.index(s, 0, 1)] *= std::polar(1.0, theta * o);
        }
        for (int j = 0; j < n; ++j)
            if (!frames.empty()) spin_gate(reg, j, frames[j].adjoint(), log);
        return std::array<std::vector<cplx>, 2>{reg.spin_slice(0), reg.spin_slice(1)};
    };
    return c;
}

const double c1 = 1.0 / 3.0 - 1.0 / std::sqrt(3.0);
const double c2 = 1.0 / 3.0 + 1.0 / std::sqrt(3.0);

} // namespace

ProtocolResult wilson_protocol(const observe::StateVector& psi, const lattice::LatticeGeometry& g,
                               const lattice::Path& loop, const ProtocolOptions& opt) {
    if (loop.size() % 2 != 0) throw ArgumentError("wilson_protocol: loop length must be even");
    const auto signs = observe::loop_signs(g, psi.basis->convention(), loop);
    std::vector<int> links;
    for (const auto& e : loop.entries) links.push_back(e.link);
    const auto env = split_by_environment(psi, links);
    const int n = int(links.size());

    ProtocolResult res;
    for (bool primed : {false, true}) {
        const auto ops = observe::v_operators(signs, primed);
        std::vector<Mat3> frames;
        cplx big_lambda = 1.0;
        for (const auto& a : ops) {
            const Frame f = clock_frame(a);
            frames.push_back(f.r);
            big_lambda *= f.lambda;
        }
        nlohmann::json log = nlohmann::json::array();
        RunResult run;
        cplx s;
        if (opt.method == Method::geometric) {
            const auto c = geometric_circuit(frames, 0.0, 2.0 * pi / 3.0, pi / std::sqrt(3.0), wilson_weights(n), opt);
            run = run_circuit(c, env, opt.repeat, opt.transcript ? &log : nullptr);
            const cplx m = run.polarization;
            s = cplx((m.real() - 1.0 / 3.0) / (c1 + c2), m.imag() / (c1 - c2));
        } else {
            const auto c = single_photon_circuit(frames, 2.0 * pi / 3.0, wilson_weights(n));
            run = run_circuit(c, env, opt.repeat, opt.transcript ? &log : nullptr);
            s = run.polarization;
        }
        const cplx value = big_lambda * s;
        if (opt.transcript)
            res.transcript.push_back({{"operator", primed ? "V_prime" : "V"},
                                      {"method", to_string(opt.method)},
                                      {"gates", log}});
        if (primed) {
            res.v_prime = value;
            res.run_v_prime = run;
        } else {
            res.v = value;
            res.run_v = run;
        }
    }
    // V and V' each carry 2^{-n/2} W, so their sum is 2^{1-n/2} W
    res.value = std::pow(2.0, 0.5 * n - 1.0) * (res.v + res.v_prime);
    return res;
}

ProtocolResult thooft_protocol(const observe::StateVector& psi, const lattice::Path& path, double varphi,
                               const ProtocolOptions& opt) {
    std::vector<int> links;
    for (const auto& e : path.entries) links.push_back(e.link);
    const auto env = split_by_environment(psi, links);
    const int n = int(links.size());
    ProtocolResult res;
    nlohmann::json log = nlohmann::json::array();
    if (opt.method == Method::geometric) {
        if (std::abs(varphi - pi) > 1e-12)
            throw ArgumentError("thooft_protocol: the geometric method supports varphi = pi only");
        const auto c = geometric_circuit({}, pi / 2.0, pi, pi / 2.0, thooft_pi_weights(n), opt);
        res.run_v = run_circuit(c, env, opt.repeat, opt.transcript ? &log : nullptr);
        // U(pi/2, pi, pi/2) = -i (-1)^n Upsilon(pi)
        res.value = cplx(0.0, n % 2 == 0 ? 1.0 : -1.0) * res.run_v.polarization;
    } else {
        Weights w;
        for (const auto& e : path.entries) w.push_back({e.sign, 0, -e.sign});
        const auto c = single_photon_circuit({}, varphi, w);
        res.run_v = run_circuit(c, env, opt.repeat, opt.transcript ? &log : nullptr);
        res.value = res.run_v.polarization;
    }
    res.v = res.value;
    if (opt.transcript)
        res.transcript.push_back({{"operator", "Upsilon"}, {"method", to_string(opt.method)}, {"gates", log}});
    return res;
}

void FidelityParams::validate() const {
    if (!(gamma >= 0.0) || !(kappa >= 0.0)) throw ArgumentError("fidelity: rates must be non-negative");
    if (!(std::abs(chi) > 0.0)) throw ArgumentError("fidelity: chi must be nonzero");
    if (!(eta_a >= 0.0 && eta_a <= 1.0) || !(eta_p >= 0.0 && eta_p <= 1.0))
        throw ArgumentError("fidelity: detection efficiencies must lie in [0, 1]");
    if (n < 0) throw ArgumentError("fidelity: n must be non-negative");
}

namespace {
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
} // namespace

double fidelity_gp(const FidelityParams& fp, double theta, double omega) {
    fp.validate();
    const double chi = std::abs(fp.chi);
    const double spin = 1.0 - fp.n * (4.0 * pi + 6.0 * theta) * fp.gamma / chi;
    const double k = fp.kappa / chi;
    const double field =
        1.0 - pi * omega * k * (std::exp(-3.0 * theta * k) + std::exp(-theta * k)) * (1.0 + pi * k / 2.0);
    return clamp01(fp.eta_a * clamp01(spin) * clamp01(field));
}

double mean_gate_time(double theta, double chi, double kappa) {
    const double c = std::abs(chi);
    if (c == 0.0) throw ArgumentError("mean_gate_time: chi must be nonzero");
    const double t0 = 2.0 * theta / c;
    const double x = 2.0 * theta * kappa / c;
    if (x == 0.0) return t0;
    const double em = std::expm1(x);
    return t0 * x * (2.0 + em) / (x + em);
}

double sp_penalty(const FidelityParams& fp, double theta) {
    fp.validate();
    return -std::expm1(-fp.gamma * mean_gate_time(theta, fp.chi, fp.kappa));
}

double fidelity_sp(const FidelityParams& fp, double theta) {
    return clamp01(fp.eta_p * (1.0 - fp.n * sp_penalty(fp, theta)));
}

Inhomogeneity inhomogeneity_error(double theta, int n, double epsilon) {
    if (!(std::abs(epsilon) < 1.0)) throw ArgumentError("inhomogeneity_error: |epsilon| must be below 1");
    if (n < 0) throw ArgumentError("inhomogeneity_error: n must be non-negative");
    Inhomogeneity r;
    const double t = std::tan(theta * epsilon);
    r.exact_bound = 0.5 * (std::pow(1.0 - t, n) + std::pow(1.0 + t, n) - 2.0);
    r.small_eps = theta * theta * n * (n - 1) * epsilon * epsilon / 2.0;
    return r;
}

} // namespace fluxlink::readout
