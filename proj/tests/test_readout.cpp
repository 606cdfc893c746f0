#include "fluxlink/errors.hpp"
#include "fluxlink/hamiltonians.hpp"
#include "fluxlink/readout.hpp"
#include "fluxlink/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fluxlink;
using namespace fluxlink::readout;
using model::BasisKind;
using model::GaugeBasis;
using std::numbers::pi;

namespace {

std::vector<cplx> random_spins(int n, unsigned seed) {
    std::vector<cplx> v(std::size_t(std::pow(3, n)));
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = cplx(std::sin(1.3 * i + seed), std::cos(0.7 * i * seed + 0.2));
        s += std::norm(v[i]);
    }
    for (auto& a : v) a /= std::sqrt(s);
    return v;
}

observe::StateVector plaquette_ground(const GaugeBasis& b, const lattice::LatticeGeometry& g) {
    const auto h = model::build_h_qlm(g, b, 1.0, 1.0 / 0.3);
    return {&b, solver::dense_eig(h).vectors[0]};
}

} // namespace

TEST_SUITE("readout") {

TEST_CASE("cavity register layout") {
    CavityRegister r(2, 5, true);
    CHECK(r.dim() == 9 * 5 * 2);
    CHECK(r.index(1, 2, 1) == (1 * 5 + 2) * 2 + 1);
    r.prepare(random_spins(2, 1));
    CHECK(r.norm() == doctest::Approx(1.0));
    CHECK(r.vacuum_population() == doctest::Approx(1.0));
    CHECK(r.leakage() == 0.0);
    CHECK_THROWS_AS(CavityRegister(9, 5, false), CapacityError);
    CHECK_THROWS_AS(CavityRegister(1, 1, false), ArgumentError);
    CHECK_THROWS_AS(r.prepare(random_spins(1, 1)), ArgumentError);
}

TEST_CASE("displacement") {
    CHECK((displacement_matrix(20, 0.0) - Eigen::MatrixXcd::Identity(20, 20)).norm() < 1e-15);
    const cplx a(0.6, -0.8);
    const Eigen::MatrixXcd p = displacement_matrix(30, a) * displacement_matrix(30, -a);
    CHECK((p - Eigen::MatrixXcd::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-8);
    CavityRegister r(1, 30, false);
    r.prepare({1.0, 0.0, 0.0});
    displacement(r, a);
    double mean = 0;
    for (int n = 0; n < 30; ++n) mean += n * std::norm(r.amp()[r.index(0, n, 0)]);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(displacement(r, 2.0), ArgumentError);
    CHECK(fock_cut_for(1.0) == 29);
}

TEST_CASE("dispersive rotation") {
    CavityRegister r(2, 12, false);
    r.prepare(random_spins(2, 2));
    displacement(r, 0.9);
    auto ref = r.amp();
    dispersive_rotation(r, 0.0, wilson_weights(2));
    CHECK(r.amp() == ref);
    dispersive_rotation(r, 0.4, wilson_weights(2));
    dispersive_rotation(r, 0.5, wilson_weights(2));
    CavityRegister s(2, 12, false);
    s.amp() = ref;
    dispersive_rotation(s, 0.9, wilson_weights(2));
    double d = 0;
    for (std::size_t i = 0; i < r.dim(); ++i) d = std::max(d, std::abs(r.amp()[i] - s.amp()[i]));
    CHECK(d < 1e-12);

    CavityRegister v(2, 12, false);
    v.prepare(random_spins(2, 3));
    const auto before = v.amp();
    dispersive_rotation(v, 1.7, wilson_weights(2));
    CHECK(v.amp() == before);
    CHECK_THROWS_AS(dispersive_rotation(v, 1.0, wilson_weights(3)), ArgumentError);
}

TEST_CASE("two-step rotation equals the direct rotation") {
    CavityRegister a(2, 12, false), b(2, 12, false);
    a.prepare(random_spins(2, 4));
    displacement(a, 1.1);
    b.amp() = a.amp();
    dispersive_rotation(a, 2 * pi / 3, wilson_weights(2), RotationMode::direct);
    dispersive_rotation(b, 2 * pi / 3, wilson_weights(2), RotationMode::two_step);
    double d = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a.amp()[i] - b.amp()[i]));
    CHECK(d < 1e-12);
}

TEST_CASE("geometric sequence reproduces exp(-i Omega sin(theta O + phi))") {
    for (int n = 1; n <= 3; ++n)
        for (auto [phi, theta, omega] : {std::tuple{0.0, 2 * pi / 3, pi / std::sqrt(3.0)}, {pi / 2, pi, pi / 2}, {0.3, 0.8, 1.1}}) {
            const auto amp = sequence_amplitudes(phi, omega);
            CavityRegister r(n, fock_cut_for(std::abs(amp[0]) + std::abs(amp[1])), false);
            const auto w = wilson_weights(n);
            // unit vectors are enough since the closed form is diagonal
            const int dim = r.spin_dim();
            const auto diag = geometric_closed_form(phi, theta, omega, w);
            double worst = 0, vac = 1;
            for (int s = 0; s < dim; ++s) {
                std::vector<cplx> e(dim, 0.0);
                e[s] = 1.0;
                r.prepare(e);
                geometric_sequence(r, phi, theta, omega, w);
                vac = std::min(vac, r.vacuum_population());
                const auto out = r.spin_slice(0);
                for (int t = 0; t < dim; ++t) worst = std::max(worst, std::abs(out[t] - (t == s ? diag[s] : 0.0)));
            }
            CHECK(worst < 1e-6);
            CHECK(vac > 1 - 1e-8);
        }
    CavityRegister r(1, 30, false);
    r.prepare(random_spins(1, 5));
    const auto before = r.amp();
    geometric_sequence(r, 0.2, 1.0, 0.0, wilson_weights(1));
    for (std::size_t i = 0; i < r.dim(); ++i) CHECK(std::abs(r.amp()[i] - before[i]) < 1e-14);
}

TEST_CASE("three-term decomposition of U(0, 2pi/3, pi/sqrt3)") {
    const double c1 = 1.0 / 3 - 1 / std::sqrt(3.0), c2 = 1.0 / 3 + 1 / std::sqrt(3.0);
    const cplx xi = std::polar(1.0, 2 * pi / 3);
    Weights w{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
    const auto d = geometric_closed_form(0.0, 2 * pi / 3, pi / std::sqrt(3.0), w);
    for (int s = 0; s < 27; ++s) {
        int o = s % 3 + (s / 3) % 3 + s / 9;
        CHECK(std::abs(d[s] - (1.0 / 3 + c1 * std::pow(xi, o) + c2 * std::pow(xi, 2 * o))) < 1e-8);
    }
}

TEST_CASE("clock frame") {
    const auto ops = observe::v_operators({1, -1}, true);
    for (const auto& a : ops) {
        const auto f = clock_frame(a);
        const model::Mat3 z = model::spin1_ops().zclock;
        CHECK((f.lambda * f.r.adjoint() * z * f.r - a).norm() < 1e-12);
        CHECK((f.r * f.r.adjoint() - model::Mat3::Identity()).norm() < 1e-12);
        const double arg = std::arg(f.lambda) < 0 ? std::arg(f.lambda) + 2 * pi : std::arg(f.lambda);
        CHECK(arg < 2 * pi / 3 + 1e-12);
    }
    CHECK_THROWS_AS(clock_frame(model::spin1_ops().sz), NumericError);
}

TEST_CASE("Wilson protocol reproduces direct expectations") {
    const auto g = lattice::build_ladder(2);
    const GaugeBasis b(g, BasisKind::gauge_sector);
    const auto loop = lattice::wilson_path(g, 0, 1, 1);
    const auto psi = plaquette_ground(b, g);
    const auto direct = observe::expect_wilson(psi, g, loop);
    const auto rnd = observe::random_state(b, 17);
    for (auto m : {Method::geometric, Method::single_photon}) {
        ProtocolOptions o;
        o.method = m;
        const auto r = wilson_protocol(psi, g, loop, o);
        CHECK(std::abs(r.value - direct) < 1e-6);
        CHECK(std::abs(r.v - observe::expect_v(psi, g, loop, false)) < 1e-6);
        CHECK(std::abs(r.v_prime - observe::expect_v(psi, g, loop, true)) < 1e-6);
        CHECK(r.run_v.vacuum_population > 1 - 1e-8);
        CHECK(std::abs(wilson_protocol(rnd, g, loop, o).value - observe::expect_wilson(rnd, g, loop)) < 1e-6);
    }
}

TEST_CASE("Wilson protocol on a zero-flux word and on a larger lattice") {
    const auto g = lattice::build_ladder(2);
    const GaugeBasis b(g, BasisKind::gauge_sector);
    const auto loop = lattice::wilson_path(g, 0, 1, 1);
    const auto r = wilson_protocol(observe::basis_state(b, 40), g, loop);
    CHECK(std::abs(r.v) < 1e-12);
    CHECK(r.run_v.polarization.real() == doctest::Approx(1.0 / 3).epsilon(1e-10));

    const auto g3 = lattice::build_ladder(3);
    const GaugeBasis b3(g3, BasisKind::gauge_sector);
    const auto psi = observe::random_state(b3, 5);
    const auto l6 = lattice::wilson_path(g3, 0, 2, 1);
    CHECK(std::abs(wilson_protocol(psi, g3, l6).value - observe::expect_wilson(psi, g3, l6)) < 1e-6);
    const auto l4 = lattice::wilson_path(g3, 1, 1, 1);
    CHECK(std::abs(wilson_protocol(psi, g3, l4).value - observe::expect_wilson(psi, g3, l4)) < 1e-6);
}

TEST_CASE("non-demolition repeat") {
    const auto g = lattice::build_ladder(2);
    const GaugeBasis b(g, BasisKind::gauge_sector);
    const auto psi = plaquette_ground(b, g);
    ProtocolOptions o;
    o.repeat = true;
    const auto r = wilson_protocol(psi, g, lattice::wilson_path(g, 0, 1, 1), o);
    CHECK(std::abs(r.run_v.repeat_sigma_x - r.run_v.polarization.real()) < 1e-10);
    CHECK(std::abs(r.run_v_prime.repeat_sigma_x - r.run_v_prime.polarization.real()) < 1e-10);
}

TEST_CASE("'t Hooft protocol") {
    const auto g = lattice::build_ladder(5);
    const GaugeBasis b(g, BasisKind::gauge_sector);
    const auto path = lattice::thooft_path(g, lattice::middle_plaquette(g));
    const auto zero = observe::basis_state(b, (model::pow3(g.n_links()) - 1) / 2);
    CHECK(std::abs(thooft_protocol(zero, path, pi).value - 1.0) < 1e-8);
    const auto psi = observe::random_state(b, 23);
    for (auto m : {Method::geometric, Method::single_photon}) {
        ProtocolOptions o;
        o.method = m;
        CHECK(std::abs(thooft_protocol(psi, path, pi, o).value - observe::expect_thooft(psi, path, pi)) < 1e-6);
    }
    ProtocolOptions sp;
    sp.method = Method::single_photon;
    CHECK(thooft_protocol(psi, path, 0.0, sp).run_v.polarization.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(thooft_protocol(psi, path, 0.7, sp).value - observe::expect_thooft(psi, path, 0.7)) < 1e-6);
    CHECK_THROWS_AS(thooft_protocol(psi, path, 0.7), ArgumentError);
}

TEST_CASE("protocol transcript") {
    const auto g = lattice::build_ladder(2);
    const GaugeBasis b(g, BasisKind::gauge_sector);
    ProtocolOptions o;
    o.transcript = true;
    const auto r = wilson_protocol(plaquette_ground(b, g), g, lattice::wilson_path(g, 0, 1, 1), o);
    REQUIRE(r.transcript.size() == 2);
    CHECK(r.transcript[0]["operator"] == "V");
    CHECK(r.transcript[0]["gates"].size() > 7);
}

TEST_CASE("geometric-phase fidelity") {
    FidelityParams fp;
    fp.gamma = fp.kappa = 0.0;
    fp.eta_a = 0.8;
    CHECK(fidelity_gp(fp, 2 * pi / 3, pi / std::sqrt(3.0)) == doctest::Approx(0.8));
    FidelityParams p;
    p.n = 9;
    p.eta_a = 0.919;
    const double w = fidelity_gp(p, 2 * pi / 3, pi / std::sqrt(3.0));
    CHECK(w > 0.87);
    CHECK(w < 0.93);
    CHECK(w == doctest::Approx(0.8969).epsilon(1e-3));
    CHECK(fidelity_gp(p, pi / 2, pi / 2) > w);
    p.eta_a = 1.5;
    CHECK_THROWS_AS(fidelity_gp(p, 1.0, 1.0), ArgumentError);
}

TEST_CASE("single-photon fidelity and gate time") {
    const double chi = 2 * pi * 99.8e6;
    CHECK(mean_gate_time(2 * pi / 3, chi, 0.0) == 2 * (2 * pi / 3) / chi);
    CHECK(mean_gate_time(2 * pi / 3, chi, 1e-3) == doctest::Approx(2 * (2 * pi / 3) / chi).epsilon(1e-6));
    CHECK(mean_gate_time(1.0, -chi, 22.2e3) == mean_gate_time(1.0, chi, 22.2e3));
    FidelityParams fp;
    fp.gamma = 0.0;
    fp.eta_p = 0.9;
    fp.n = 5;
    CHECK(fidelity_sp(fp, 2 * pi / 3) == doctest::Approx(0.9));
    FidelityParams p;
    CHECK(sp_penalty(p, 2 * pi / 3) == doctest::Approx(-std::expm1(-p.gamma * mean_gate_time(2 * pi / 3, p.chi, p.kappa))));
    // frozen: literal rates give 4.46e-4 per spin
    CHECK(sp_penalty(p, 2 * pi / 3) == doctest::Approx(4.46e-4).epsilon(2e-3));
}

TEST_CASE("inhomogeneity error") {
    CHECK(inhomogeneity_error(2.0, 8, 0.0).exact_bound == 0.0);
    CHECK(inhomogeneity_error(2.0, 8, 0.0).small_eps == 0.0);
    const auto r = inhomogeneity_error(2 * pi / 3, 10, 1e-3);
    CHECK(std::abs(r.exact_bound / r.small_eps - 1.0) < 0.05);
    CHECK(inhomogeneity_error(2 * pi / 3, 8, 0.01).small_eps == doctest::Approx(1.2281e-2).epsilon(1e-3));
    CHECK_THROWS_AS(inhomogeneity_error(1.0, 3, 1.0), ArgumentError);
}

TEST_CASE("method names") {
    CHECK(parse_method("single_photon") == Method::single_photon);
    CHECK(to_string(Method::geometric) == "geometric");
    CHECK_THROWS_AS(parse_method("x"), ArgumentError);
}

}
