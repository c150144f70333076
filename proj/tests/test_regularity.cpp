#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "degel/presets.hpp"
#include "degel/regularity.hpp"
#include "degel/rng.hpp"
#include "degel/solver.hpp"

using namespace degel;

TEST_CASE("holder seminorm", "[regularity]") {
    auto grid = std::make_shared<const Grid<2>>(65, 2);
    const auto half_ball = grid->ball({0.0, 0.0}, 0.5);

    SECTION("beta = 1 on a plane recovers the slope exactly") {
        const Vec<2> q{1.25, -0.5};
        auto u = ScalarField<2>::sample(grid, [q](const Vec<2>& x) { return dot(q, x); });
        REQUIRE(holder_seminorm(u, half_ball, 1.0) == Catch::Approx(norm2(q)).margin(1e-12));
    }

    SECTION("|x|^{1/2} with beta = 1/2 is exactly 1 against the origin") {
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) {
            return std::pow(norm2sq(x), 0.25);
        });
        const auto ball = grid->ball({0.0, 0.0}, 1.0);
        REQUIRE(holder_seminorm(u, ball, 0.5) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("constants have zero seminorm") {
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>&) { return 3.0; });
        REQUIRE(holder_seminorm(u, half_ball, 0.7) == 0.0);
    }

    SECTION("degenerate inputs are rejected") {
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>&) { return 0.0; });
        std::vector<std::size_t> one = {grid->interior()[0]};
        REQUIRE_THROWS_AS(holder_seminorm(u, one, 0.5), DomainError);
        REQUIRE_THROWS_AS(holder_seminorm(u, half_ball, 0.0), DomainError);
        REQUIRE_THROWS_AS(holder_seminorm(u, half_ball, 1.5), DomainError);
    }
}

TEST_CASE("oscillation profile", "[regularity]") {
    SECTION("linear fields profile to zero at every scale") {
        auto grid = std::make_shared<const Grid<2>>(65, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return 0.7 * x[0]; });
        const auto prof = oscillation_profile(u, {0.0, 0.0}, 0.5, 3);
        REQUIRE(prof.entries.size() == 4);
        for (const auto& e : prof.entries) REQUIRE(e.phi <= 1e-12);
    }

    SECTION("|x|^2 has phi(r) = r^2 exactly at lattice radii") {
        auto grid = std::make_shared<const Grid<2>>(129, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return norm2sq(x); });
        const auto prof = oscillation_profile(u, {0.0, 0.0}, 0.5, 3);
        REQUIRE(prof.entries.size() == 4);
        for (const auto& e : prof.entries)
            REQUIRE(e.phi == Catch::Approx(e.r * e.r).margin(1e-10));
    }

    SECTION("|x|^{3/2} keeps phi/r^{3/2} constant across resolved scales") {
        auto grid = std::make_shared<const Grid<2>>(257, 2);
        auto u = ScalarField<2>::sample(grid, boundary_preset<2>("radial-3-2"));
        const auto prof = oscillation_profile(u, {0.0, 0.0}, 0.5, 4);
        REQUIRE(prof.entries.size() == 5);
        for (const auto& e : prof.entries) {
            const double ratio = e.phi / std::pow(e.r, 1.5);
            REQUIRE(ratio == Catch::Approx(1.0).margin(0.1));
        }
    }

    SECTION("under-resolved tail truncates with a flag") {
        auto grid = std::make_shared<const Grid<2>>(33, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return norm2sq(x); });
        const auto prof = oscillation_profile(u, {0.0, 0.0}, 0.5, 10);
        REQUIRE(prof.truncated);
        REQUIRE(prof.entries.size() < 11);
        REQUIRE(prof.entries.back().r >= 4.0 * grid->h());
    }
}

TEST_CASE("exponent fit", "[regularity]") {
    SECTION("exact power laws are recovered to machine precision") {
        OscillationProfile<2> prof;
        for (int k = 0; k <= 4; ++k) {
            const double r = std::pow(0.5, k);
            prof.entries.push_back({k, r, std::pow(r, 1.5), zero_vec<2>()});
        }
        const auto fit = fit_exponent(prof);
        REQUIRE(fit.alpha == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(fit.stderr_ <= 1e-12);

        for (auto& e : prof.entries) e.phi = e.r * e.r;
        REQUIRE(fit_exponent(prof).alpha == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("scales at the noise floor are excluded and reported") {
        OscillationProfile<2> prof;
        for (int k = 0; k <= 4; ++k) {
            const double r = std::pow(0.5, k);
            prof.entries.push_back({k, r, std::pow(r, 1.5), zero_vec<2>()});
        }
        prof.entries.push_back({5, std::pow(0.5, 5), 1e-18, zero_vec<2>()});
        const auto fit = fit_exponent(prof);
        REQUIRE(fit.excluded_scales == 1);
        REQUIRE(fit.alpha == Catch::Approx(0.5).margin(1e-12));
    }

    SECTION("fewer than three usable scales is insufficient data") {
        OscillationProfile<2> prof;
        prof.entries.push_back({0, 1.0, 1.0, zero_vec<2>()});
        prof.entries.push_back({1, 0.5, 0.35, zero_vec<2>()});
        REQUIRE_THROWS_AS(fit_exponent(prof), InsufficientData);
    }
}

TEST_CASE("flatness step", "[regularity]") {
    SECTION("the zero field succeeds trivially") {
        auto grid = std::make_shared<const Grid<2>>(65, 2);
        ScalarField<2> u(grid);
        const auto st = flatness_step(u, zero_vec<2>(), 0.1);
        REQUIRE(st.success);
        REQUIRE(st.osc_after == 0.0);
    }

    SECTION("|x|^{3/2}/2 at rho = 0.1 lands under the closed-form value") {
        auto grid = std::make_shared<const Grid<2>>(257, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) {
            return 0.5 * std::pow(norm2sq(x), 0.75);
        });
        const auto st = flatness_step(u, zero_vec<2>(), 0.1);
        REQUIRE(st.success);
        // continuum value 0.5 * 0.1^{3/2}; the lattice ball can only fall short
        REQUIRE(st.osc_after <= 0.5 * std::pow(0.1, 1.5) + 1e-12);
        REQUIRE(st.osc_after >= 0.014);
    }

    SECTION("oscillation precondition is enforced") {
        auto grid = std::make_shared<const Grid<2>>(65, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return 2.0 * x[0]; });
        REQUIRE_THROWS_AS(flatness_step(u, zero_vec<2>(), 0.5), DomainError);
    }
}

TEST_CASE("flatness iteration", "[regularity]") {
    SECTION("linear fields pass at every level with zero oscillation") {
        auto grid = std::make_shared<const Grid<2>>(129, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) { return 0.3 * x[0] + 0.1 * x[1]; });
        const auto trace = flatness_iterate(u, 1.0, 0.5, 0.4, 6);
        REQUIRE(trace.size() >= 4);
        for (const auto& row : trace) {
            REQUIRE(row.bound_ok);
            if (row.k > 0) REQUIRE(row.osc_val <= 1e-9);
        }
    }

    SECTION("|x|^{3/2}/2 with gamma=1, alpha=0.4 passes every resolved level") {
        auto grid = std::make_shared<const Grid<2>>(257, 2);
        auto u = ScalarField<2>::sample(grid, [](const Vec<2>& x) {
            return 0.5 * std::pow(norm2sq(x), 0.75);
        });
        const auto trace = flatness_iterate(u, 1.0, 0.5, 0.4, 8);
        REQUIRE(trace.size() >= 5);
        for (const auto& row : trace) {
            INFO("k=" << row.k << " osc=" << row.osc_val << " bound=" << row.bound);
            REQUIRE(row.bound_ok);
        }
    }

    SECTION("alpha at the constraint boundary is a configuration error") {
        auto grid = std::make_shared<const Grid<2>>(65, 2);
        ScalarField<2> u(grid);
        REQUIRE_THROWS_AS(flatness_iterate(u, 1.0, 0.5, 0.5, 4), ConfigError);
        REQUIRE_NOTHROW(flatness_iterate(u, 1.0, 0.5, 0.499, 4));
    }
}

TEST_CASE("flatness rho helper", "[regularity]") {
    // C0 rho^{alpha0} <= 1/4 and rho < 2^{-gamma-1}
    const double rho = flatness_rho_bound(2.0, 0.5, 1.0);
    REQUIRE(2.0 * std::pow(rho, 0.5) <= 0.25 + 1e-12);
    REQUIRE(rho < 0.25);
    const double capped = flatness_rho_bound(1e-9, 0.9, 0.0);
    REQUIRE(capped < 0.5);
    REQUIRE_THROWS_AS(flatness_rho_bound(-1.0, 0.5, 1.0), ConfigError);
}

TEST_CASE("doubling certificate", "[regularity][oracle]") {
    auto grid = std::make_shared<const Grid<2>>(65, 2);
    const double h = grid->h();

    SECTION("the zero field certifies with M = 0") {
        ScalarField<2> u(grid);
        DoublingConfig<2> cfg = DoublingConfig<2>::with_default_l2(0.5, {0.0, 0.0}, 1.0, 2.0 / 3.0);
        const auto cert = doubling_certify(u, cfg);
        REQUIRE(cert.m == 0.0);
        REQUIRE(cert.certified);
        REQUIRE_FALSE(cert.has_witness);
    }

    SECTION("slope 2 L1 produces a positive M with an e1-aligned witness") {
        const double l1 = 1.0;
        auto u = ScalarField<2>::sample(grid, [l1](const Vec<2>& x) { return 2.0 * l1 * x[0]; });
        // x0 between nodes halves the localization penalty of the witness pair
        DoublingConfig<2> cfg =
            DoublingConfig<2>::with_default_l2(0.5, {0.5 * h, 0.0}, l1, 2.0 / 3.0);
        const auto cert = doubling_certify(u, cfg);
        // exhaustive-scan value: pair ((h,0),(0,0)) gives omega0 * h^{3/2}
        const double expect = (2.0 / 3.0) * std::pow(h, 1.5);
        REQUIRE(cert.m == Catch::Approx(expect).margin(1e-12));
        REQUIRE(cert.has_witness);
        const Vec<2> sep = cert.witness_x - cert.witness_y;
        REQUIRE(sep[1] == 0.0);
        REQUIRE(std::abs(sep[0]) >= h / 2.0);
        REQUIRE(norm2(cert.witness_x - cfg.x0) <= 2.0 * h);
    }

    SECTION("slope L1/2 certifies (Lipschitz constant under the modulus)") {
        const double l1 = 1.0;
        auto u = ScalarField<2>::sample(grid, [l1](const Vec<2>& x) { return 0.5 * l1 * x[0]; });
        DoublingConfig<2> cfg =
            DoublingConfig<2>::with_default_l2(0.5, {0.5 * h, 0.0}, l1, 2.0 / 3.0);
        const auto cert = doubling_certify(u, cfg);
        REQUIRE(cert.certified);
        // best achievable is the coincident pair closest to x0
        REQUIRE(cert.m == Catch::Approx(-2.0 * cfg.L2 * 0.25 * h * h).margin(1e-12));
    }

    SECTION("sufficient direction: slope at L1 omega(1) certifies") {
        const double l1 = 2.0;
        const double c = l1 / 3.0; // omega(1) = 1/3 at omega0 = 2/3
        auto u = ScalarField<2>::sample(grid, [c](const Vec<2>& x) { return c * x[0]; });
        DoublingConfig<2> cfg = DoublingConfig<2>::with_default_l2(0.5, {0.0, 0.0}, l1, 2.0 / 3.0);
        REQUIRE(doubling_certify(u, cfg).certified);
    }

    SECTION("config validation") {
        ScalarField<2> u(grid);
        DoublingConfig<2> cfg = DoublingConfig<2>::with_default_l2(0.5, {0.0, 0.0}, 1.0, 1.0);
        // omega0 = 1 gives s0 = 4/9 < 1
        REQUIRE_THROWS_AS(doubling_certify(u, cfg), ConfigError);
        cfg.omega0 = 2.0 / 3.0;
        cfg.x0 = {0.4, 0.0}; // outside B_{r/2}
        REQUIRE_THROWS_AS(doubling_certify(u, cfg), ConfigError);
    }
}
