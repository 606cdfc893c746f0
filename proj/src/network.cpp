#include "fluxlink/network.hpp"

#include "fluxlink/errors.hpp"
#include "fluxlink/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fluxlink::network {

using std::numbers::pi;

namespace {

bool near_phase(double phi, double target) {
    return std::abs(std::remainder(phi - target, 2.0 * pi)) < 1e-9;
}

} // namespace

void NetworkParams::validate() const {
    link.validate();
    ancilla.validate();
    if (!(e_cl >= 0.0)) throw ArgumentError("network: e_cl must be non-negative");
    if (xi.has_value() == e_cc.has_value())
        throw ArgumentError("network: exactly one of xi and e_cc must be given");
    if (xi && !(*xi > 0.0)) throw ArgumentError("network: xi must be positive");
    if (e_cc && !(*e_cc >= 0.0)) throw ArgumentError("network: e_cc must be non-negative");
}

double NetworkParams::resolved_e_cc() const {
    if (e_cc) return *e_cc;
    return ecc_ratio(xi.value()) * link.e_c;
}

double NetworkParams::resolved_xi() const {
    if (xi) return *xi;
    return xi_from_ecc_ratio(e_cc.value() / link.e_c);
}

NetworkParams strong_coupling_preset() {
    NetworkParams np;
    np.link = {0.06, 0.2, 0.003, 0.0};
    np.ancilla = {0.2, 1.0, 0.01, pi};
    np.e_cl = 0.0002;
    np.e_cc = 0.04;
    return np;
}

device::DeviceParams shifted_link(const NetworkParams& np) {
    auto p = np.link;
    p.e_l += 2.0 * np.e_cl;
    return p;
}

device::DeviceParams shifted_ancilla(const NetworkParams& np) {
    auto p = np.ancilla;
    p.e_l += 4.0 * np.e_cl;
    return p;
}

CouplingSet derive_couplings(const NetworkParams& np, int dim, ChargeElement charge) {
    np.validate();
    if (!near_phase(np.link.phi_off, 0.0)) throw ArgumentError("derive_couplings: link needs phi_off = 0");
    if (!near_phase(np.ancilla.phi_off, pi)) throw ArgumentError("derive_couplings: ancilla needs phi_off = pi");

    const auto link = shifted_link(np);
    const auto anc = shifted_ancilla(np);
    const auto ls = device::spectrum(link, dim);
    const auto q = device::qutrit_states(ls);
    const auto as = device::spectrum(anc, dim);

    CouplingSet c;
    c.e_cc = np.resolved_e_cc();
    c.delta = as.energies[1] - as.energies[0];
    if (!(c.delta > 0.0)) throw NumericError("derive_couplings: ancilla gap is not positive");
    const Eigen::MatrixXd phi_a = device::phi_operator(dim, as.beta);
    c.phi_ge = std::abs(as.vectors.col(0).dot(phi_a * as.vectors.col(1)));
    c.phi_plus = q.phi_elements(device::q_plus, device::q_plus);
    c.v = q.splitting_v;
    c.doublet_splitting = q.doublet_splitting;

    if (charge == ChargeElement::exact) {
        c.n_plus_zero = q.charge_elements(device::q_plus, device::q_zero);
        c.charge_source = "exact";
    } else {
        const double sigma = std::pow(8.0 * link.e_c / link.e_j, 0.25);
        c.n_plus_zero = device::tb_charge_element(1, 0, sigma);
        c.charge_source = "tight_binding";
    }
    c.j = -8.0 * c.e_cc * std::norm(c.n_plus_zero);
    c.u = np.e_cl * np.e_cl * c.phi_ge * c.phi_ge * c.phi_plus * c.phi_plus / c.delta;

    if (c.u > 0.0) {
        c.g2_mag_inv = 2.0 * c.j * c.j / c.u;
        c.g2_elec = c.v + c.g2_mag_inv;
        c.product = c.g2_elec / c.g2_mag_inv;
    } else {
        c.gauss_constraint_absent = true;
        c.g2_mag_inv = std::numeric_limits<double>::infinity();
        c.g2_elec = std::numeric_limits<double>::infinity();
        c.product = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
}

double cap_kernel(double kx, double ky, double xi) {
    if (!(xi > 0.0)) throw ArgumentError("cap_kernel: xi must be positive");
    const double x2 = xi * xi;
    return 1.0 + 4.0 * x2 - 2.0 * x2 * (std::cos(kx) + std::cos(ky));
}

namespace {

std::pair<double, double> trapezoid(int dx, int dy, double xi, int n) {
    const double h = 2.0 * pi / n;
    std::vector<double> cosk(n);
    for (int a = 0; a < n; ++a) cosk[a] = std::cos(a * h);
    const double x2 = xi * xi;
    double re = 0.0;
    double im = 0.0;
    for (int a = 0; a < n; ++a) {
        double row_re = 0.0;
        double row_im = 0.0;
        for (int b = 0; b < n; ++b) {
            const double d = 1.0 + 4.0 * x2 - 2.0 * x2 * (cosk[a] + cosk[b]);
            const double ph = (a * h) * dx + (b * h) * dy;
            row_re += std::cos(ph) / d;
            row_im += std::sin(ph) / d;
        }
        re += row_re;
        im += row_im;
    }
    const double norm = 1.0 / (double(n) * n);
    return {re * norm, im * norm};
}

} // namespace

QuadratureReport cap_inverse_report(int dx, int dy, double xi, double rel_tol) {
    if (!(xi > 0.0)) throw ArgumentError("cap_inverse: xi must be positive");
    int n = 32;
    while (n < 4 * (std::abs(dx) + std::abs(dy))) n *= 2;
    // c(dx) can sit far below the roundoff of a sum whose terms are of order c(0)
    const double floor = 1e-13 * cap_c0_closed(xi);
    auto prev = trapezoid(dx, dy, xi, n);
    for (n *= 2; n <= 16384; n *= 2) {
        const auto cur = trapezoid(dx, dy, xi, n);
        const double diff = std::abs(cur.first - prev.first);
        if (diff <= rel_tol * std::abs(cur.first) || diff <= floor) {
            if (std::abs(cur.second) > 1e-10)
                throw NumericError("cap_inverse: imaginary part not negligible");
            return {cur.first, cur.second, n};
        }
        prev = cur;
    }
    std::ostringstream os;
    os << "cap_inverse: quadrature did not converge for dx=(" << dx << "," << dy << "), xi=" << xi;
    throw NumericError(os.str());
}

double cap_inverse(int dx, int dy, double xi, double rel_tol) {
    return cap_inverse_report(dx, dy, xi, rel_tol).value;
}

double cap_c0_closed(double xi) {
    if (!(xi > 0.0)) throw ArgumentError("cap_c0_closed: xi must be positive");
    const double w = std::sqrt(1.0 / (xi * xi) + 8.0);
    return 2.0 * specfun::elliptic_k(-16.0 * xi * xi / (1.0 / (xi * xi) + 8.0)) / (pi * xi * w);
}

double cap_far_k0(double r, double xi) {
    if (!(xi > 0.0) || !(r > 0.0)) throw ArgumentError("cap_far_k0: r and xi must be positive");
    return specfun::bessel_k0(r / xi) / (2.0 * pi * xi * xi);
}

double ecc_ratio(double xi) {
    if (!(xi > 0.0)) throw ArgumentError("ecc_ratio: xi must be positive");
    const double inv2 = 1.0 / (xi * xi);
    const double k0 = 1.0 / xi > 700.0 ? 0.0 : specfun::bessel_k0(1.0 / xi);
    return std::sqrt(8.0 + inv2) * k0 / (4.0 * xi * specfun::elliptic_k(-16.0 * xi * xi / (8.0 + inv2)));
}

double xi_from_ecc_ratio(double ratio) {
    double lo = std::log(1e-3);
    double hi = std::log(50.0);
    if (!(ratio > ecc_ratio(std::exp(lo)) && ratio < ecc_ratio(std::exp(hi))))
        throw ArgumentError("xi_from_ecc_ratio: ratio outside the supported range");
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ecc_ratio(std::exp(mid)) < ratio) lo = mid;
        else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

DriveParams make_drive(const device::QutritData& q, const device::Spectrum& s, double omega_f, double g) {
    DriveParams d;
    d.omega_f = omega_f;
    d.g_strength = g;
    const Eigen::MatrixXd phi = device::phi_operator(s.dim, s.beta);
    const double me = s.vectors.col(q.s_index).dot(phi * q.states.col(device::q_zero));
    d.rabi = -g * me;
    d.detuning = omega_f - (s.energies[q.s_index] - q.energies[device::q_zero]);
    return d;
}

namespace {

struct StarkTable {
    double v = 0.0;
    std::array<double, 3> e{};
    // included (qutrit, level, |<level|phi|i>|^2)
    std::vector<std::tuple<int, int, double>> terms;
    std::vector<double> levels;
};

StarkTable stark_table(const device::QutritData& q, const device::Spectrum& s, const StarkOptions& opt) {
    StarkTable t;
    t.v = q.splitting_v;
    t.e = q.energies;
    t.levels = s.energies;
    const Eigen::MatrixXd phi = device::phi_operator(s.dim, s.beta);
    const int top = std::min(opt.max_level, s.dim - 1);
    const double cut = opt.weight_cut * s.beta * s.beta;
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd pv = phi * q.states.col(i);
        for (int l = q.s_index; l <= top; ++l) {
            const double me = s.vectors.col(l).dot(pv);
            if (me * me >= cut) t.terms.emplace_back(i, l, me * me);
        }
    }
    return t;
}

double detuning(const StarkTable& t, int i, int l, double omega) { return omega - (t.levels[l] - t.e[i]); }

double min_detuning(const StarkTable& t, double omega) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& [i, l, w] : t.terms) m = std::min(m, std::abs(detuning(t, i, l, omega)));
    return m;
}

// Shifts per unit g^2.
std::array<double, 3> unit_shifts(const StarkTable& t, double omega) {
    std::array<double, 3> a{};
    for (const auto& [i, l, w] : t.terms) a[i] += w / (4.0 * detuning(t, i, l, omega));
    return a;
}

double v_slope(const std::array<double, 3>& a) { return a[0] - 0.5 * (a[1] + a[2]); }

} // namespace

StarkResult stark_shift(const device::QutritData& q, const device::Spectrum& s, const DriveParams& d,
                        const StarkOptions& opt) {
    const StarkTable t = stark_table(q, s, opt);
    StarkResult r;
    r.v = t.v;
    const double g2 = d.g_strength * d.g_strength;
    for (const auto& [i, l, w] : t.terms) {
        const double det = detuning(t, i, l, d.omega_f);
        if (std::abs(det) < opt.resonance_floor) {
            std::ostringstream os;
            os << "stark_shift: drive resonant with level " << l << " from qutrit state " << i
               << " (detuning " << det << ")";
            throw ResonanceError(os.str());
        }
        const double c = g2 * w / (4.0 * det);
        r.shifts[i] += c;
        r.terms.push_back({i, l, det, c});
    }
    r.v_eff = r.v + r.shifts[0] - 0.5 * (r.shifts[1] + r.shifts[2]);
    return r;
}

DriveOptimum optimize_drive(const device::QutritData& q, const device::Spectrum& s, const DriveBounds& b,
                            const StarkOptions& opt) {
    if (!(b.omega_hi >= b.omega_lo) || !(b.g2_hi >= b.g2_lo) || b.g2_lo < 0.0)
        throw ArgumentError("optimize_drive: invalid bounds");
    if (b.omega_points < 1) throw ArgumentError("optimize_drive: need at least one frequency point");
    const StarkTable t = stark_table(q, s, opt);
    const double floor = std::max(b.exclusion, opt.resonance_floor);
    int evals = 0;

    auto best_g2 = [&](double slope) {
        if (slope == 0.0) return b.g2_lo;
        return std::clamp(-t.v / slope, b.g2_lo, b.g2_hi);
    };
    // Objective |V'| at the best g^2 for this frequency; infinite when excluded.
    auto objective = [&](double omega, double& g2) {
        ++evals;
        if (min_detuning(t, omega) < floor) return std::numeric_limits<double>::infinity();
        const double slope = v_slope(unit_shifts(t, omega));
        g2 = best_g2(slope);
        return std::abs(t.v + g2 * slope);
    };

    const int np = b.omega_points;
    const double step = np > 1 ? (b.omega_hi - b.omega_lo) / (np - 1) : 0.0;
    int best = -1;
    double best_f = std::numeric_limits<double>::infinity();
    double best_g = 0.0;
    std::vector<double> fs(np);
    for (int k = 0; k < np; ++k) {
        double g2 = 0.0;
        const double w = b.omega_lo + k * step;
        fs[k] = objective(w, g2);
        // strict improvement keeps the lowest frequency among ties
        if (fs[k] < best_f * (1.0 - 1e-12) || (best < 0 && std::isfinite(fs[k]))) {
            best = k;
            best_f = fs[k];
            best_g = g2;
        }
    }
    if (best < 0) throw OptimizationError("optimize_drive: no feasible frequency in the bounds");

    double omega = b.omega_lo + best * step;
    if (np > 1) {
        double lo = std::max(b.omega_lo, omega - step);
        double hi = std::min(b.omega_hi, omega + step);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo);
        double x2 = lo + gr * (hi - lo);
        double g1 = 0.0, g2v = 0.0;
        double f1 = objective(x1, g1);
        double f2 = objective(x2, g2v);
        for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(omega)); ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = objective(x1, g1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = objective(x2, g2v);
            }
        }
        double gm = 0.0;
        const double xm = 0.5 * (lo + hi);
        const double fm = objective(xm, gm);
        if (fm < best_f) {
            omega = xm;
            best_f = fm;
            best_g = gm;
        }
    }

    DriveOptimum out;
    out.drive = make_drive(q, s, omega, std::sqrt(best_g));
    out.stark = stark_shift(q, s, out.drive, opt);
    out.objective = std::abs(out.stark.v_eff);
    out.evaluations = evals;
    return out;
}

DecoherenceBudget decoherence_budget(const CouplingSet& cs, double e_unit_hz, double t1_ancilla,
                                     int links_per_ancilla, double error_budget) {
    if (!(e_unit_hz > 0.0) || !(t1_ancilla > 0.0)) throw ArgumentError("decoherence_budget: rates must be positive");
    if (!(cs.u > 0.0)) throw ArgumentError("decoherence_budget: U must be positive");
    DecoherenceBudget d;
    d.gap_min = 8.0 * cs.j * cs.j / cs.u;
    if (d.gap_min == 0.0) {
        d.infinite_time = true;
        d.t_sim = std::numeric_limits<double>::infinity();
        d.ancilla_error = 1.0;
        d.max_links = 0;
        return d;
    }
    d.t_sim = 2.0 / (d.gap_min * e_unit_hz);
    d.ancilla_error = -std::expm1(-d.t_sim / t1_ancilla);
    d.max_links = static_cast<long long>(links_per_ancilla) *
                  static_cast<long long>(std::floor(error_budget / d.ancilla_error));
    return d;
}

} // namespace fluxlink::network
