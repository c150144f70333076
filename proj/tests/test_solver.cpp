#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "degel/presets.hpp"
#include "degel/rng.hpp"
#include "degel/solver.hpp"

using namespace degel;

namespace {

double max_error_against(const ScalarField<2>& u, const std::function<double(const Vec<2>&)>& ref,
                         double min_radius = 0.0) {
    double worst = 0.0;
    const Grid<2>& g = u.grid();
    for (std::size_t idx : g.interior()) {
        const Vec<2> x = g.coords(idx);
        if (norm2(x) < min_radius) continue;
        worst = std::max(worst, std::abs(u[idx] - ref(x)));
    }
    return worst;
}

} // namespace

TEST_CASE("linear boundary data solves exactly", "[solver]") {
    for (double gamma : {0.0, 1.0, 2.0}) {
        for (const auto& op :
             {EllipticOperator::neg_laplacian(), EllipticOperator::pucci_minus(1.0, 2.0),
              EllipticOperator::pucci_plus(1.0, 2.0)}) {
            ProblemSpec<2> spec;
            spec.gamma = gamma;
            spec.op = op;
            spec.n = 33;
            const Vec<2> q{0.4, -0.7};
            spec.boundary = [q](const Vec<2>& x) { return dot(q, x); };
            auto [u, rep] = solve(spec);
            INFO("gamma=" << gamma << " op=" << to_string(op.kind));
            REQUIRE(rep.converged);
            REQUIRE(max_error_against(u, [q](const Vec<2>& x) { return dot(q, x); }) <= 1e-6);
        }
    }
}

TEST_CASE("manufactured gamma=1 problem converges at the expected rate", "[solver][oracle]") {
    const auto exact = boundary_preset<2>("radial-3-2");
    double prev = -1.0;
    const double budget[2] = {0.1, 0.04};
    int bi = 0;
    for (int n : {33, 65}) {
        ProblemSpec<2> spec;
        spec.gamma = 1.0;
        spec.op = EllipticOperator::neg_laplacian();
        spec.boundary = exact;
        spec.f = rhs_preset<2>("example-rhs", 1.0);
        spec.n = n;
        auto [u, rep] = solve(spec);
        REQUIRE(rep.converged);
        const double err = max_error_against(u, exact, 0.1);
        INFO("n=" << n << " err=" << err << " iters=" << rep.iterations);
        REQUIRE(err <= budget[bi++]);
        if (prev > 0.0) REQUIRE(prev / err >= 1.5);
        prev = err;
    }
}

TEST_CASE("large slope freezes the multiplier and keeps linears exact", "[solver]") {
    ProblemSpec<2> spec;
    spec.gamma = 2.0;
    spec.p = {1e6, 0.0};
    spec.op = EllipticOperator::neg_laplacian();
    spec.n = 33;
    spec.boundary = [](const Vec<2>& x) { return x[1]; };
    auto [u, rep] = solve(spec);
    REQUIRE(rep.converged);
    REQUIRE(max_error_against(u, [](const Vec<2>& x) { return x[1]; }) <= 1e-6);
}

TEST_CASE("discrete comparison principle", "[solver][property]") {
    Rng rng(1311);
    for (int trial = 0; trial < 3; ++trial) {
        const double a = rng.uniform(0.1, 0.5);
        const double b = rng.uniform(0.0, 0.4);
        ProblemSpec<2> lospec;
        lospec.gamma = 1.0;
        lospec.op = EllipticOperator::pucci_minus(1.0, 2.0);
        lospec.n = 33;
        lospec.f = [](const Vec<2>&) { return 0.05; };
        lospec.boundary = [a](const Vec<2>& x) { return a * (x[0] * x[0] - x[1] * x[1]); };
        ProblemSpec<2> hispec = lospec;
        // g2 = g1 + nonnegative bump
        hispec.boundary = [a, b](const Vec<2>& x) {
            return a * (x[0] * x[0] - x[1] * x[1]) + b * (2.0 - x[0]);
        };
        auto [ulo, rlo] = solve(lospec);
        auto [uhi, rhi] = solve(hispec);
        REQUIRE(rlo.converged);
        REQUIRE(rhi.converged);
        double worst = 0.0;
        for (std::size_t idx : ulo.grid().interior())
            worst = std::max(worst, ulo[idx] - uhi[idx]);
        REQUIRE(worst <= 1e-6);
    }
}

TEST_CASE("scaling covariance of the solve", "[solver][property]") {
    // solving (kappa g, kappa^{1+gamma} f) returns kappa * u up to solver tol;
    // the strong linear part keeps |grad u| above the scheme's gradient floor,
    // where the floored multiplier is exactly gamma-homogeneous
    const double kappa = 0.35, gamma = 1.0;
    ProblemSpec<2> spec;
    spec.gamma = gamma;
    spec.op = EllipticOperator::neg_laplacian();
    spec.n = 33;
    spec.boundary = [](const Vec<2>& x) { return 2.0 * x[0] + 0.2 * (x[0] * x[0] - x[1] * x[1]); };
    spec.f = [](const Vec<2>&) { return 0.05; };

    ProblemSpec<2> scaled = spec;
    scaled.boundary = [&](const Vec<2>& x) { return kappa * spec.boundary(x); };
    const double kf = std::pow(kappa, 1.0 + gamma);
    scaled.f = [kf](const Vec<2>&) { return 0.05 * kf; };

    auto [u, r1] = solve(spec);
    auto [v, r2] = solve(scaled);
    REQUIRE(r1.converged);
    REQUIRE(r2.converged);
    double worst = 0.0;
    for (std::size_t idx : u.grid().interior())
        worst = std::max(worst, std::abs(v[idx] - kappa * u[idx]));
    REQUIRE(worst <= 1e-5);
}

TEST_CASE("non-convergence is reported, not thrown", "[solver]") {
    ProblemSpec<2> spec;
    spec.gamma = 1.0;
    spec.op = EllipticOperator::neg_laplacian();
    spec.boundary = boundary_preset<2>("radial-3-2");
    spec.f = rhs_preset<2>("example-rhs", 1.0);
    spec.n = 33;
    SolveOptions opt;
    opt.max_iters = 5;
    auto [u, rep] = solve(spec, opt);
    REQUIRE_FALSE(rep.converged);
    REQUIRE(rep.iterations == 5);
    REQUIRE(std::isfinite(rep.final_residual));
}

TEST_CASE("non-finite data is a numerical failure", "[solver]") {
    ProblemSpec<2> spec;
    spec.n = 33;
    spec.f = [](const Vec<2>& x) {
        return x[0] > 0.5 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    REQUIRE_THROWS_AS(solve(spec), ConfigError); // rejected upfront: f unbounded

    ProblemSpec<2> overflow;
    overflow.n = 33;
    overflow.gamma = 2.0;
    overflow.boundary = [](const Vec<2>& x) { return 1e200 * x[0]; };
    overflow.f = [](const Vec<2>&) { return 1.0; };
    REQUIRE_THROWS_AS(solve(overflow), NumericalFailure);
}

TEST_CASE("kappa normalization", "[solver]") {
    auto grid = std::make_shared<const Grid<2>>(17, 2);

    SECTION("already normalized data has kappa = 1") {
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return 0.5 * x[0]; });
        ScalarField<2> f(grid); // zero
        const auto out = kappa_normalize(u, f, 0.1, 1.0);
        REQUIRE(out.kappa == Catch::Approx(1.0).margin(1e-14));
        REQUIRE_FALSE(out.trivial);
    }

    SECTION("worked example: ||u|| = 1, ||f|| = eps0 gives 1/3") {
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return x[0]; });
        auto f = ScalarField<2>::sample(grid, [](const Vec<2>&) { return 0.25; });
        for (double gamma : {0.0, 1.0, 3.0}) {
            const auto out = kappa_normalize(u, f, 0.25, gamma);
            REQUIRE(out.kappa == Catch::Approx(1.0 / 3.0).margin(1e-14));
        }
    }

    SECTION("u = f = 0 yields the infinite sentinel") {
        ScalarField<2> u(grid), f(grid);
        const auto out = kappa_normalize(u, f, 0.1, 1.0);
        REQUIRE(out.trivial);
        REQUIRE(std::isinf(out.kappa));
    }

    SECTION("postconditions hold for random data") {
        Rng rng(2024);
        for (int t = 0; t < 50; ++t) {
            ScalarField<2> u(grid), f(grid);
            for (auto& v : u.values()) v = rng.uniform(-8.0, 8.0);
            for (auto& v : f.values()) v = rng.uniform(-3.0, 3.0);
            const double eps0 = rng.uniform(0.01, 1.0);
            const double gamma = rng.uniform(0.0, 3.0);
            const auto out = kappa_normalize(u, f, eps0, gamma);
            REQUIRE(out.u.max_abs() <= 0.5 + 1e-12);
            REQUIRE(out.f.max_abs() <= eps0 + 1e-12);
        }
    }

    SECTION("bad eps0 is rejected") {
        ScalarField<2> u(grid), f(grid);
        REQUIRE_THROWS_AS(kappa_normalize(u, f, 0.0, 1.0), ConfigError);
        REQUIRE_THROWS_AS(kappa_normalize(u, f, 1.5, 1.0), ConfigError);
    }
}

TEST_CASE("1-D manufactured oracle", "[solver][oracle]") {
    // d=1: |u'| u'' = C with u = |x|^{3/2}, C = (3/2)^2 * (1/2) = 9/8
    ProblemSpec<1> spec;
    spec.gamma = 1.0;
    spec.op = EllipticOperator::neg_laplacian();
    spec.n = 129;
    spec.stencil_radius = 1;
    spec.boundary = [](const Vec<1>& x) { return std::pow(x[0] * x[0], 0.75); };
    const double c = radial_power_rhs_constant(1.0, 1);
    REQUIRE(c == Catch::Approx(9.0 / 8.0).margin(1e-15));
    spec.f = [c](const Vec<1>&) { return c; };
    auto [u, rep] = solve(spec);
    REQUIRE(rep.converged);
    double err = 0.0;
    for (std::size_t idx : u.grid().interior()) {
        const double x = u.grid().coords(idx)[0];
        if (std::abs(x) >= 0.1)
            err = std::max(err, std::abs(u[idx] - std::pow(x * x, 0.75)));
    }
    REQUIRE(err <= 0.01);
}

TEST_CASE("3-D linear solve exercises the full stencil", "[solver]") {
    ProblemSpec<3> spec;
    spec.gamma = 1.0;
    spec.op = EllipticOperator::pucci_minus(1.0, 2.0);
    spec.n = 11;
    spec.stencil_radius = 1;
    const Vec<3> q{0.5, -0.25, 1.0};
    spec.boundary = [q](const Vec<3>& x) { return dot(q, x); };
    auto [u, rep] = solve(spec);
    REQUIRE(rep.converged);
    double err = 0.0;
    for (std::size_t idx : u.grid().interior())
        err = std::max(err, std::abs(u[idx] - dot(q, u.grid().coords(idx))));
    REQUIRE(err <= 1e-6);
}

TEST_CASE("solve report bookkeeping", "[solver]") {
    ProblemSpec<2> spec;
    spec.n = 33;
    spec.boundary = boundary_preset<2>("linear-x1");
    auto [u, rep] = solve(spec);
    REQUIRE(rep.converged);
    REQUIRE(rep.final_residual <= 1e-8);
    REQUIRE(rep.dt_min > 0.0);
    REQUIRE(rep.dt_min <= rep.dt_max);
    REQUIRE(rep.iterations > 0);
}
