#include "fluxlink/errors.hpp"
#include "fluxlink/network.hpp"
#include "fluxlink/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fluxlink;
using namespace fluxlink::network;
using std::numbers::pi;

namespace {

// c(dx, dy): the ky integral is done in closed form,
// (1/2pi) int cos(ky dy) / (a - b cos ky) = r^|dy| / sqrt(a^2 - b^2),
// and kx by composite Simpson.
double cap_oracle(int dx, int dy, double xi) {
    const double x2 = xi * xi;
    const int n = 4000;
    const double h = 2 * pi / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double kx = -pi + i * h;
        const double a = 1 + 4 * x2 - 2 * x2 * std::cos(kx);
        const double b = 2 * x2;
        const double root = std::sqrt(a * a - b * b);
        const double r = (a - root) / b;
        const double f = std::cos(kx * dx) * std::pow(r, std::abs(dy)) / root;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * f;
    }
    return s * h / 3.0 / (2 * pi);
}

} // namespace

TEST_SUITE("network") {

TEST_CASE("capacitance kernel") {
    CHECK(cap_kernel(0, 0, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cap_kernel(pi, pi, 0.7) == doctest::Approx(1 + 8 * 0.49));
    CHECK(cap_kernel(pi, 0, 0.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(cap_kernel(0, 0, 0.0), ArgumentError);
}

TEST_CASE("cap_inverse against the semi-analytic oracle") {
    for (double xi : {0.2, 0.5, 1.0, 2.0})
        for (auto [dx, dy] : {std::pair{0, 0}, {1, 0}, {2, 1}, {3, 0}})
            CHECK(cap_inverse(dx, dy, xi) == doctest::Approx(cap_oracle(dx, dy, xi)).epsilon(1e-8));
    CHECK(cap_inverse(0, 0, 1e-3) == doctest::Approx(1.0).epsilon(1e-5));
    const auto r = cap_inverse_report(2, 1, 0.5);
    CHECK(std::abs(r.imag_discarded) < 1e-12);
    CHECK(r.points >= 64);
}

TEST_CASE("cap_inverse symmetry") {
    CHECK(cap_inverse(2, 1, 0.8) == doctest::Approx(cap_inverse(1, 2, 0.8)).epsilon(1e-10));
    CHECK(cap_inverse(-2, 1, 0.8) == doctest::Approx(cap_inverse(2, -1, 0.8)).epsilon(1e-10));
}

TEST_CASE("closed-form on-site inverse capacitance") {
    for (double xi : {0.2, 0.5, 1.0, 3.0}) CHECK(cap_c0_closed(xi) == doctest::Approx(cap_oracle(0, 0, xi)).epsilon(1e-8));
}

TEST_CASE("K0 far-field form") {
    const double xi = 0.3;
    const double k0 = cap_far_k0(3.0, xi);
    CHECK(k0 == doctest::Approx(specfun::bessel_k0(10.0) / (2 * pi * 0.09)).epsilon(1e-14));
    // continuum form; on the lattice it only holds once xi spans several sites
    CHECK(k0 / cap_inverse(3, 0, xi) - 1.0 == doctest::Approx(-0.8681).epsilon(1e-3));
    CHECK(std::abs(cap_far_k0(3.0, 3.0) / cap_inverse(3, 0, 3.0) - 1.0) < 0.02);
    CHECK(std::abs(cap_far_k0(5.0, 3.0) / cap_inverse(5, 0, 3.0) - 1.0) < 0.02);
    CHECK_THROWS_AS(cap_far_k0(0.0, xi), ArgumentError);
}

TEST_CASE("lattice decay of the inverse capacitance") {
    for (double xi : {0.2, 0.3, 0.5, 1.0, 2.0}) {
        // pole of the lattice kernel: cosh(kappa) = 1 + 1/(2 xi^2)
        const double kappa = std::acosh(1.0 + 0.5 / (xi * xi));
        const double c0 = cap_inverse(0, 0, xi);
        double prev = c0;
        for (int d = 1; d <= 10; ++d) {
            const double c = cap_inverse(d, 0, xi);
            CHECK(c > 0.0);
            CHECK(c < prev);
            CHECK(c / c0 < std::exp(-kappa * d + 1.0));
            prev = c;
        }
        const double tail = cap_inverse(9, 0, xi) / cap_inverse(8, 0, xi);
        CHECK(tail == doctest::Approx(std::exp(-kappa) * std::sqrt(8.0 / 9.0)).epsilon(0.01));
    }
    // values below the roundoff of the sum still terminate
    CHECK_NOTHROW(cap_inverse(16, 0, 0.2));
}

TEST_CASE("ecc_ratio") {
    CHECK(ecc_ratio(1e-3) == 0.0);
    CHECK(ecc_ratio(0.02) < 1e-10);
    const double q = cap_oracle(1, 0, 1.0) / cap_oracle(0, 0, 1.0);
    CHECK(std::abs(ecc_ratio(1.0) / q - 1.0) < 0.05);
    double prev = 0.0;
    for (int i = 0; i <= 18; ++i) {
        const double x = 0.1 + 0.05 * i;
        const double v = ecc_ratio(x);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(xi_from_ecc_ratio(ecc_ratio(0.7)) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK_THROWS_AS(xi_from_ecc_ratio(5.0), ArgumentError);
}

TEST_CASE("strong-coupling preset") {
    const auto np = strong_coupling_preset();
    CHECK(np.link.e_j == 0.2);
    CHECK(np.link.e_c == 0.06);
    CHECK(np.link.e_l == 0.003);
    CHECK(np.ancilla.e_j == 1.0);
    CHECK(np.ancilla.e_c == 0.2);
    CHECK(np.ancilla.e_l == 0.01);
    CHECK(np.ancilla.phi_off == doctest::Approx(pi));
    CHECK(np.e_cl == 0.0002);
    CHECK(np.resolved_e_cc() == 0.04);
    CHECK(ecc_ratio(np.resolved_xi()) * np.link.e_c == doctest::Approx(0.04).epsilon(1e-9));
}

TEST_CASE("network validation") {
    auto np = strong_coupling_preset();
    np.xi = 0.5;
    CHECK_THROWS_AS(np.validate(), ArgumentError);
    np = strong_coupling_preset();
    np.e_cl = -1.0;
    CHECK_THROWS_AS(derive_couplings(np), ArgumentError);
    np = strong_coupling_preset();
    np.link.phi_off = pi;
    CHECK_THROWS_AS(derive_couplings(np), ArgumentError);
}

TEST_CASE("derived couplings: frozen regression values") {
    const auto c = derive_couplings(strong_coupling_preset());
    CHECK(c.v == doctest::Approx(0.0654275).epsilon(1e-5));
    CHECK(c.u == doctest::Approx(1.56935e-3).epsilon(1e-5));
    CHECK(c.j == doctest::Approx(-5.88627e-4).epsilon(1e-5));
    CHECK(c.delta == doctest::Approx(8.96907e-3).epsilon(1e-5));
    CHECK(c.product == doctest::Approx(149.173).epsilon(1e-5));
    CHECK(c.doublet_splitting == doctest::Approx(6.94113e-4).epsilon(1e-5));
    CHECK(0.0002 / c.delta == doctest::Approx(0.0223).epsilon(1e-2));
    CHECK(c.charge_source == "exact");
    CHECK_FALSE(c.gauss_constraint_absent);
}

TEST_CASE("derived couplings: internal relations") {
    const auto c = derive_couplings(strong_coupling_preset());
    CHECK(c.j == doctest::Approx(-8 * c.e_cc * std::norm(c.n_plus_zero)).epsilon(1e-14));
    CHECK(c.u == doctest::Approx(0.0002 * 0.0002 * std::pow(c.phi_ge * c.phi_plus, 2) / c.delta).epsilon(1e-14));
    CHECK(c.g2_mag_inv == doctest::Approx(2 * c.j * c.j / c.u).epsilon(1e-14));
    CHECK(c.g2_elec == doctest::Approx(c.v + c.g2_mag_inv).epsilon(1e-14));
    CHECK(c.product == doctest::Approx(c.g2_elec / c.g2_mag_inv).epsilon(1e-14));
    CHECK(std::abs(c.n_plus_zero.real()) < 1e-12);
}

TEST_CASE("vanishing loop capacitance removes the Gauss penalty") {
    auto np = strong_coupling_preset();
    const auto ref = derive_couplings(np);
    np.e_cl = 0.0;
    const auto c = derive_couplings(np);
    CHECK(c.u == 0.0);
    CHECK(c.gauss_constraint_absent);
    CHECK(std::isnan(c.product));
    // J depends on e_cl only through the small inductive shift of the link
    CHECK(c.j == doctest::Approx(ref.j).epsilon(0.05));
}

TEST_CASE("tight-binding charge element option") {
    const auto c = derive_couplings(strong_coupling_preset(), 80, ChargeElement::tight_binding);
    CHECK(c.charge_source == "tight_binding");
    CHECK(c.j < 0.0);
}

TEST_CASE("Stark shifts") {
    const auto np = strong_coupling_preset();
    const auto s = device::spectrum(shifted_link(np));
    const auto q = device::qutrit_states(s);
    const auto zero = stark_shift(q, s, make_drive(q, s, 0.3, 0.0));
    for (double x : zero.shifts) CHECK(x == 0.0);
    CHECK(zero.v_eff == zero.v);

    // one included level below the drive: negative detuning lowers V
    StarkOptions one;
    one.max_level = q.s_index;
    const double e3 = s.energies[q.s_index] - q.energies[device::q_zero];
    const auto red = stark_shift(q, s, make_drive(q, s, e3 - 0.01, 0.05), one);
    CHECK(red.v_eff < red.v);

    CHECK_THROWS_AS(stark_shift(q, s, make_drive(q, s, e3, 0.05), one), ResonanceError);
}

TEST_CASE("drive optimisation") {
    const auto np = strong_coupling_preset();
    const auto s = device::spectrum(shifted_link(np));
    const auto q = device::qutrit_states(s);
    const double ej = np.link.e_j;
    DriveBounds b{1.4 * ej, 1.8 * ej, 0.2 * ej * ej, 0.2 * ej * ej, 201, 21, 1e-3};
    const auto o = optimize_drive(q, s, b);
    CHECK(std::abs(o.drive.omega_f / ej / 1.588 - 1.0) < 0.05);
    CHECK(o.drive.omega_f / ej == doctest::Approx(1.61192).epsilon(1e-4));
    CHECK(std::abs(o.stark.v_eff) < 1e-10);

    DriveBounds off = b;
    off.g2_lo = off.g2_hi = 0.0;
    const auto z = optimize_drive(q, s, off);
    CHECK(z.stark.v_eff == z.stark.v);

    // wider bounds can only do at least as well as the pinned reference point
    DriveBounds wide{1.2 * ej, 2.0 * ej, 0.0, 0.5 * ej * ej, 301, 21, 1e-3};
    const auto w = optimize_drive(q, s, wide);
    const auto ref = stark_shift(q, s, make_drive(q, s, 1.588 * ej, std::sqrt(0.2) * ej));
    CHECK(std::abs(w.stark.v_eff) <= std::abs(ref.v_eff) + 1e-15);

    DriveBounds bad = b;
    bad.omega_hi = 0.0;
    CHECK_THROWS_AS(optimize_drive(q, s, bad), ArgumentError);
}

TEST_CASE("decoherence budget") {
    CouplingSet cs;
    cs.u = 0.032;
    cs.j = -0.04 * cs.u;
    const auto d = decoherence_budget(cs, 40e9, 1e-3);
    const double gap = 8 * cs.j * cs.j / cs.u;
    CHECK(d.gap_min == doctest::Approx(gap));
    CHECK(d.t_sim == doctest::Approx(2.0 / (gap * 40e9)));
    CHECK(d.ancilla_error == doctest::Approx(-std::expm1(-d.t_sim / 1e-3)));
    CHECK(d.max_links == 2 * (long long)std::floor(0.01 / d.ancilla_error));
    cs.j = 0.0;
    CHECK(decoherence_budget(cs, 40e9, 1e-3).infinite_time);
    cs.u = 0.0;
    CHECK_THROWS_AS(decoherence_budget(cs, 40e9, 1e-3), ArgumentError);
}

}
