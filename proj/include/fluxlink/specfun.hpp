#pragma once

namespace fluxlink::specfun {

struct PrecisionPolicy {
    double rel_tol = 1e-12;
    int max_terms = 500;

    void validate() const;
};

// Complete elliptic integral of the first kind, parameter convention:
// K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt, defined for m < 1.
double elliptic_k(double m, const PrecisionPolicy& policy = {});

// Modified Bessel function of the second kind, order zero, x > 0.
double bessel_k0(double x, const PrecisionPolicy& policy = {});

// Branches of bessel_k0, exposed so the crossover can be checked.
double bessel_k0_series(double x, const PrecisionPolicy& policy = {});
double bessel_k0_cf(double x, const PrecisionPolicy& policy = {});

// Generalized Laguerre polynomial L_n^{(b)}(x) by upward recurrence.
double laguerre(int n, int b, double x);

// ln(n!)
double log_factorial(int n);

inline constexpr double euler_gamma = 0.57721566490153286061;

} // namespace fluxlink::specfun
