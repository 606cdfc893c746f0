#include "fluxlink/solver.hpp"

#include "fluxlink/errors.hpp"
#include "fluxlink/observe.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace fluxlink::solver {

namespace {

double dot_re(const StateVec& a, const StateVec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::real(std::conj(a[i]) * b[i]);
    return s;
}

cplx dot(const StateVec& a, const StateVec& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double nrm(const StateVec& a) { return std::sqrt(dot_re(a, a)); }

void axpy(cplx a, const StateVec& x, StateVec& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

StateVec random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    StateVec v(n);
    for (auto& x : v) x = cplx(nd(rng), nd(rng));
    return v;
}

// Two passes of classical Gram-Schmidt; returns the projections.
std::vector<cplx> orthogonalize(const std::vector<StateVec>& basis, StateVec& w) {
    std::vector<cplx> h(basis.size(), 0.0);
    for (int pass = 0; pass < 2; ++pass)
        for (size_t i = 0; i < basis.size(); ++i) {
            const cplx c = dot(basis[i], w);
            h[i] += c;
            axpy(-c, basis[i], w);
        }
    return h;
}

double degeneracy_tol(double norm) { return 1e-9 * std::max(1.0, norm); }

} // namespace

EigResult dense_eig(const model::SparseOperator& h, bool want_vectors) {
    if (h.dim() > dense_cap)
        throw CapacityError("dense_eig: dimension " + std::to_string(h.dim()) + " exceeds " + std::to_string(dense_cap));
    if (h.dim() == 0) throw ArgumentError("dense_eig: empty operator");
    const Eigen::MatrixXcd m = h.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, want_vectors ? Eigen::ComputeEigenvectors
                                                                         : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("dense_eig: eigensolver failed");
    EigResult r;
    r.norm_estimate = h.norm_bound();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.energies.push_back(es.eigenvalues()(i));
    if (want_vectors) {
        for (Eigen::Index i = 0; i < es.eigenvectors().cols(); ++i) {
            StateVec v(es.eigenvectors().rows());
            for (Eigen::Index k = 0; k < es.eigenvectors().rows(); ++k) v[k] = es.eigenvectors()(k, i);
            const StateVec hv = h.apply(v);
            StateVec res = hv;
            axpy(-r.energies[i], v, res);
            r.residuals.push_back(nrm(res));
            r.vectors.push_back(std::move(v));
        }
    }
    r.degenerate_ground = r.energies.size() > 1 && r.energies[1] - r.energies[0] <= degeneracy_tol(r.norm_estimate);
    return r;
}

EigResult lanczos_ground(const model::SparseOperator& h, const LanczosOptions& opt) {
    const std::size_t n = h.dim();
    if (opt.k < 1) throw ArgumentError("lanczos: k must be at least 1");
    if (n == 0) throw ArgumentError("lanczos: empty operator");
    if (std::size_t(opt.k) > n) throw ArgumentError("lanczos: k exceeds the dimension");
    if (opt.max_basis < opt.k + 2) throw ArgumentError("lanczos: max_basis too small for k");

    if (n <= std::max<std::size_t>(opt.dense_below, 2 * std::size_t(opt.max_basis))) {
        EigResult full = dense_eig(h, true);
        full.energies.resize(opt.k);
        full.vectors.resize(opt.k);
        full.residuals.resize(opt.k);
        return full;
    }

    const double norm = std::max(h.norm_bound(), 1e-300);
    const double target = opt.tol * norm;
    std::mt19937_64 rng(opt.seed);

    std::vector<StateVec> v;
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(opt.max_basis, opt.max_basis);

    StateVec start = (opt.start && opt.start->size() == n) ? *opt.start : random_vec(n, rng);
    double s0 = nrm(start);
    if (s0 == 0.0) {
        start = random_vec(n, rng);
        s0 = nrm(start);
    }
    for (auto& x : start) x /= s0;
    v.push_back(std::move(start));

    EigResult r;
    r.norm_estimate = norm;
    Eigen::VectorXd theta;
    Eigen::MatrixXcd s;
    StateVec w;
    double beta = 0.0;

    for (int it = 1; it <= opt.max_iterations; ++it) {
        r.iterations = it;
        const int j = int(v.size()) - 1;
        w = h.apply(v[j]);
        const auto proj = orthogonalize(v, w);
        for (int i = 0; i <= j; ++i) {
            t(i, j) = proj[i];
            t(j, i) = std::conj(proj[i]);
        }
        t(j, j) = std::real(proj[j]);
        beta = nrm(w);

        const int m = j + 1;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.topLeftCorner(m, m));
        theta = es.eigenvalues();
        s = es.eigenvectors();

        bool converged = m >= opt.k;
        for (int i = 0; converged && i < opt.k; ++i) converged = beta * std::abs(s(m - 1, i)) <= target;
        if (converged) break;

        if (beta <= 1e-12 * norm) {
            // invariant subspace without the wanted pairs: continue from a fresh direction
            w = random_vec(n, rng);
            orthogonalize(v, w);
            beta = nrm(w);
            if (beta == 0.0) throw NumericError("lanczos: Krylov space exhausted");
            for (auto& x : w) x /= beta;
            beta = 0.0;
            if (m == opt.max_basis) {
                // restart keeping Ritz vectors
            } else {
                v.push_back(w);
                continue;
            }
        } else {
            for (auto& x : w) x /= beta;
        }

        if (m < opt.max_basis) {
            v.push_back(w);
            continue;
        }

        // thick restart: keep the lowest Ritz vectors, then the residual direction
        const int keep = std::min(std::max(opt.k + 10, m / 2), m - 1);
        std::vector<StateVec> y(keep, StateVec(n, 0.0));
        for (int i = 0; i < keep; ++i)
            for (int q = 0; q < m; ++q) axpy(s(q, i), v[q], y[i]);
        t.setZero();
        for (int i = 0; i < keep; ++i) t(i, i) = theta(i);
        v = std::move(y);
        v.push_back(w);
        if (it == opt.max_iterations) break;
    }

    const int m = int(v.size());
    if (theta.size() == 0 || m < opt.k) throw NumericError("lanczos: no Ritz values");
    const int mm = int(theta.size());
    for (int i = 0; i < opt.k; ++i) {
        StateVec y(n, 0.0);
        for (int q = 0; q < mm; ++q) axpy(s(q, i), v[q], y);
        const double yn = nrm(y);
        for (auto& x : y) x /= yn;
        StateVec res = h.apply(y);
        const double e = dot_re(y, res);
        axpy(-e, y, res);
        r.energies.push_back(e);
        r.residuals.push_back(nrm(res));
        r.vectors.push_back(std::move(y));
    }
    for (int i = 0; i < opt.k; ++i)
        if (r.residuals[i] > std::max(100.0 * target, 1e-8 * norm))
            throw NumericError("lanczos: not converged after " + std::to_string(r.iterations) +
                               " iterations (residual " + std::to_string(r.residuals[i]) + ")");
    r.degenerate_ground = opt.k > 1 && r.energies[1] - r.energies[0] <= degeneracy_tol(norm);
    return r;
}

std::string to_string(Builder b) {
    switch (b) {
    case Builder::qlm: return "qlm";
    case Builder::imp: return "imp";
    case Builder::eff: return "eff";
    }
    return "?";
}

Builder parse_builder(const std::string& s) {
    if (s == "qlm") return Builder::qlm;
    if (s == "imp") return Builder::imp;
    if (s == "eff") return Builder::eff;
    throw ArgumentError("unknown builder '" + s + "'");
}

std::string to_string(Control c) {
    switch (c) {
    case Control::g2_elec: return "g2_elec";
    case Control::v: return "V";
    case Control::u: return "U";
    }
    return "?";
}

Control parse_control(const std::string& s) {
    if (s == "g2_elec" || s == "g2") return Control::g2_elec;
    if (s == "V" || s == "v") return Control::v;
    if (s == "U" || s == "u") return Control::u;
    throw ArgumentError("unknown control parameter '" + s + "'");
}

model::BasisKind basis_for(Builder b, const SweepOptions& opt) {
    return b == Builder::imp ? opt.imp_basis : model::BasisKind::gauge_sector;
}

model::SparseOperator build(Builder b, const lattice::LatticeGeometry& g, const model::GaugeBasis& basis,
                            Control control, double value, const FixedParams& f) {
    switch (b) {
    case Builder::qlm: {
        if (control != Control::g2_elec) throw ArgumentError("qlm sweeps only over g2_elec");
        const double g2_mag = f.g2_mag_inv == 0.0 ? INFINITY : 1.0 / f.g2_mag_inv;
        return model::build_h_qlm(g, basis, value, g2_mag);
    }
    case Builder::imp:
    case Builder::eff: {
        if (control == Control::g2_elec) throw ArgumentError(to_string(b) + " sweeps over V or U");
        const double v = control == Control::v ? value : f.v;
        const double u = control == Control::u ? value : f.u;
        if (b == Builder::imp) return model::build_h_imp(g, basis, v, u, f.j);
        return model::build_h_eff(g, basis, v, u, f.j, f.eff_form);
    }
    }
    throw ArgumentError("unknown builder");
}

namespace {

double evaluate(const ObservableSpec& o, const lattice::LatticeGeometry& g, const observe::StateVector& psi) {
    const int target = o.target_plaquette < 0 ? lattice::middle_plaquette(g) : o.target_plaquette;
    if (o.name == "upsilon") {
        const auto path = lattice::thooft_path(g, target, o.convention);
        return std::real(observe::expect_thooft(psi, path, o.varphi));
    }
    if (o.name == "wilson") {
        const auto& xy = g.plaquette_xy.at(target);
        const auto loop = lattice::wilson_path(g, g.vertex_at(xy[0], xy[1]), 1, 1);
        return std::real(observe::expect_wilson(psi, g, loop));
    }
    if (o.name == "gauss_density") return observe::gauss_density(psi, g);
    throw ArgumentError("unknown observable '" + o.name + "'");
}

SweepRecord solve_point(Builder builder, const lattice::LatticeGeometry& g, const model::GaugeBasis& basis,
                        Control control, double value, const FixedParams& fixed,
                        const std::vector<ObservableSpec>& observables, LanczosOptions lopt, StateVec* warm) {
    SweepRecord rec;
    rec.control = value;
    rec.dim = basis.size();
    try {
        const auto h = build(builder, g, basis, control, value, fixed);
        lopt.k = std::max(lopt.k, basis.size() > 1 ? 2 : 1);
        if (warm && !warm->empty()) lopt.start = warm;
        const auto r = lanczos_ground(h, lopt);
        rec.e0 = r.energies[0];
        rec.gap = r.energies.size() > 1 ? r.energies[1] - r.energies[0] : 0.0;
        rec.degenerate = r.degenerate_ground;
        rec.iterations = r.iterations;
        observe::StateVector psi{&basis, r.vectors[0]};
        for (const auto& o : observables) {
            try {
                rec.observables.push_back({o.name, evaluate(o, g, psi)});
            } catch (const Error& e) {
                rec.observables.push_back({o.name, NAN});
                if (rec.error.empty()) rec.error = e.what();
            }
        }
        if (warm) *warm = r.vectors[0];
    } catch (const Error& e) {
        rec.error = e.what();
        rec.e0 = rec.gap = NAN;
        for (const auto& o : observables) rec.observables.push_back({o.name, NAN});
    }
    return rec;
}

} // namespace

std::vector<SweepRecord> sweep(Builder builder, const lattice::LatticeGeometry& g, Control control,
                               const std::vector<double>& grid, const FixedParams& fixed,
                               const std::vector<ObservableSpec>& observables, const SweepOptions& opt) {
    if (grid.empty()) throw ArgumentError("sweep: empty grid");
    const model::GaugeBasis basis(g, basis_for(builder, opt), opt.basis);
    std::vector<SweepRecord> out;
    out.reserve(grid.size());
    if (!opt.parallel) {
        StateVec warm;
        for (double x : grid) {
            out.push_back(solve_point(builder, g, basis, control, x, fixed, observables, opt.lanczos, &warm));
            if (opt.progress) opt.progress(out.back());
        }
        return out;
    }
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t first = 0; first < grid.size(); first += workers) {
        std::vector<std::future<SweepRecord>> jobs;
        for (std::size_t i = first; i < std::min(grid.size(), first + workers); ++i)
            jobs.push_back(std::async(std::launch::async, [&, i] {
                return solve_point(builder, g, basis, control, grid[i], fixed, observables, opt.lanczos, nullptr);
            }));
        for (auto& j : jobs) {
            out.push_back(j.get());
            if (opt.progress) opt.progress(out.back());
        }
    }
    return out;
}

} // namespace fluxlink::solver
