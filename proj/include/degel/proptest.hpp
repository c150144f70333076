#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "degel/operators.hpp"
#include "degel/rng.hpp"
#include "degel/sym.hpp"

namespace degel {

struct PropertySuiteResult {
    std::string name;
    long long samples = 0;
    double max_violation = 0.0; // worst slack deficit / mismatch observed
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

/// Random rotation times diag(spectrum): a symmetric matrix whose eigenvalues
/// are known by construction, so closed-form eigenvalue paths can be checked
/// against it without running any eigen-solver.
inline SymMatrix<2> from_spectrum(double mu0, double mu1, double theta) {
    const Vec<2> e1{std::cos(theta), std::sin(theta)};
    const Vec<2> e2{-std::sin(theta), std::cos(theta)};
    SymMatrix<2> m = SymMatrix<2>::outer(mu0, e1);
    m += SymMatrix<2>::outer(mu1, e2);
    return m;
}

inline SymMatrix<2> random_sym(Rng& rng, double scale = 2.0) {
    SymMatrix<2> m;
    m(0, 0) = rng.uniform(-scale, scale);
    m(1, 1) = rng.uniform(-scale, scale);
    m(0, 1) = rng.uniform(-scale, scale);
    return m;
}

inline EllipticOperator random_op(Rng& rng) {
    const double lam = rng.uniform(0.2, 2.0);
    const double Lam = lam + rng.uniform(0.0, 3.0);
    switch (rng.index(3)) {
        case 0: return EllipticOperator::neg_laplacian();
        case 1: return EllipticOperator::pucci_minus(lam, Lam);
        default: return EllipticOperator::pucci_plus(lam, Lam);
    }
}

} // namespace detail

/// Closed-form Pucci values against the construct-from-spectrum oracle.
inline PropertySuiteResult suite_pucci_closed_form(std::uint64_t seed, long long samples) {
    Rng rng(seed);
    PropertySuiteResult r{"pucci-closed-form-vs-spectrum-oracle", samples, 0.0, 1e-12, false};
    for (long long s = 0; s < samples; ++s) {
        const double mu0 = rng.uniform(-3.0, 3.0);
        const double mu1 = rng.uniform(-3.0, 3.0);
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        const double lam = rng.uniform(0.2, 2.0);
        const double Lam = lam + rng.uniform(0.0, 3.0);
        const SymMatrix<2> x = detail::from_spectrum(mu0, mu1, th);
        const double want_minus =
            -Lam * (std::max(mu0, 0.0) + std::max(mu1, 0.0)) -
            lam * (std::min(mu0, 0.0) + std::min(mu1, 0.0));
        const double want_plus =
            -lam * (std::max(mu0, 0.0) + std::max(mu1, 0.0)) -
            Lam * (std::min(mu0, 0.0) + std::min(mu1, 0.0));
        const EllipticityConstants c(lam, Lam);
        r.max_violation = std::max(r.max_violation, std::abs(pucci_minus_of(x, c) - want_minus));
        r.max_violation = std::max(r.max_violation, std::abs(pucci_plus_of(x, c) - want_plus));
        // duality P+(X) = -P-(-X)
        r.max_violation =
            std::max(r.max_violation, std::abs(pucci_plus_of(x, c) + pucci_minus_of(-1.0 * x, c)));
    }
    r.pass = r.max_violation <= r.tolerance;
    return r;
}

/// Ellipticity sandwich P^-(Y) <= F(X+Y) - F(X) <= P^+(Y) for all built-ins.
inline PropertySuiteResult suite_pucci_sandwich(std::uint64_t seed, long long samples) {
    Rng rng(seed);
    PropertySuiteResult r{"pucci-sandwich", samples, 0.0, 1e-12, false};
    for (long long s = 0; s < samples; ++s) {
        const EllipticOperator op = detail::random_op(rng);
        const SymMatrix<2> x = detail::random_sym(rng);
        const SymMatrix<2> y = detail::random_sym(rng);
        const auto [lo, hi] = pucci_sandwich(op, x, y);
        r.max_violation = std::max(r.max_violation, -std::min(lo, hi));
    }
    r.pass = r.max_violation <= r.tolerance;
    return r;
}

/// Positive 1-homogeneity a^{-1} F(aX) = F(X).
inline PropertySuiteResult suite_homogeneity(std::uint64_t seed, long long samples) {
    Rng rng(seed);
    PropertySuiteResult r{"rescaling-homogeneity", samples, 0.0, 1e-12, false};
    for (long long s = 0; s < samples; ++s) {
        const EllipticOperator op = detail::random_op(rng);
        const SymMatrix<2> x = detail::random_sym(rng);
        const double a = rng.uniform(0.05, 8.0);
        const double fx = eval_F(op, x);
        const double rescaled = eval_F(op, a * x) / a;
        const double scale = std::max(1.0, std::abs(fx));
        r.max_violation = std::max(r.max_violation, std::abs(rescaled - fx) / scale);
    }
    r.pass = r.max_violation <= r.tolerance;
    return r;
}

/// Uniform ellipticity slacks lambda tr Y <= F(X) - F(X+Y) <= Lambda tr Y
/// for PSD Y built as squares.
inline PropertySuiteResult suite_ellipticity_gap(std::uint64_t seed, long long samples) {
    Rng rng(seed);
    PropertySuiteResult r{"uniform-ellipticity-gap", samples, 0.0, 1e-12, false};
    for (long long s = 0; s < samples; ++s) {
        const EllipticOperator op = detail::random_op(rng);
        const SymMatrix<2> x = detail::random_sym(rng);
        const double mu0 = rng.uniform(0.0, 3.0);
        const double mu1 = rng.uniform(0.0, 3.0);
        const SymMatrix<2> y = detail::from_spectrum(mu0, mu1, rng.uniform(0.0, 2.0 * M_PI));
        const auto [lo, hi] = ellipticity_gap(op, x, y);
        r.max_violation = std::max(r.max_violation, -std::min(lo, hi));
    }
    r.pass = r.max_violation <= r.tolerance;
    return r;
}

/// Degenerate-elliptic monotonicity of F: Y >= 0 implies F(X+Y) <= F(X).
inline PropertySuiteResult suite_monotonicity(std::uint64_t seed, long long samples) {
    Rng rng(seed);
    PropertySuiteResult r{"matrix-monotonicity", samples, 0.0, 1e-12, false};
    for (long long s = 0; s < samples; ++s) {
        const EllipticOperator op = detail::random_op(rng);
        const SymMatrix<2> x = detail::random_sym(rng);
        const double mu0 = rng.uniform(0.0, 3.0);
        const double mu1 = rng.uniform(0.0, 3.0);
        const SymMatrix<2> y = detail::from_spectrum(mu0, mu1, rng.uniform(0.0, 2.0 * M_PI));
        r.max_violation = std::max(r.max_violation, eval_F(op, x + y) - eval_F(op, x));
    }
    r.pass = r.max_violation <= r.tolerance;
    return r;
}

inline std::vector<PropertySuiteResult> run_operator_property_suites(std::uint64_t seed,
                                                                     long long samples) {
    return {suite_pucci_closed_form(seed, samples), suite_pucci_sandwich(seed + 1, samples),
            suite_homogeneity(seed + 2, samples), suite_ellipticity_gap(seed + 3, samples),
            suite_monotonicity(seed + 4, samples)};
}

} // namespace degel
