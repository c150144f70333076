#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "degel/operators.hpp"
#include "degel/proptest.hpp"
#include "degel/rng.hpp"

using namespace degel;

TEST_CASE("eval_F closed forms", "[operators]") {
    const auto lap = EllipticOperator::neg_laplacian();
    const auto pm = EllipticOperator::pucci_minus(1.0, 2.0);

    SECTION("F(0) = 0 for every kind") {
        const SymMatrix<2> z = SymMatrix<2>::zero();
        REQUIRE(eval_F(lap, z) == 0.0);
        REQUIRE(eval_F(pm, z) == 0.0);
        REQUIRE(eval_F(EllipticOperator::pucci_plus(0.5, 3.0), z) == 0.0);
    }

    SECTION("P- on diag(1,-1) with lambda=1, Lambda=2") {
        REQUIRE(eval_F(pm, SymMatrix<2>::diag({1.0, -1.0})) == Catch::Approx(-1.0).margin(1e-14));
    }

    SECTION("P- on the identity") {
        REQUIRE(eval_F(pm, SymMatrix<2>::identity()) == Catch::Approx(-4.0).margin(1e-14));
    }

    SECTION("P- with lambda = Lambda = 1 collapses to -trace") {
        const auto unit = EllipticOperator::pucci_minus(1.0, 1.0);
        Rng rng(7);
        for (int i = 0; i < 100; ++i) {
            const SymMatrix<2> x = detail::random_sym(rng);
            REQUIRE(eval_F(unit, x) == Catch::Approx(-x.trace()).margin(1e-13));
        }
    }
}

TEST_CASE("2x2 eigenvalues recover a constructed spectrum", "[operators][oracle]") {
    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
        double mu0 = rng.uniform(-4.0, 4.0);
        double mu1 = rng.uniform(-4.0, 4.0);
        if (mu0 > mu1) std::swap(mu0, mu1);
        const auto x = detail::from_spectrum(mu0, mu1, rng.uniform(0.0, 2.0 * M_PI));
        const auto ev = x.eigenvalues();
        REQUIRE(ev[0] == Catch::Approx(mu0).margin(1e-12));
        REQUIRE(ev[1] == Catch::Approx(mu1).margin(1e-12));
    }
}

TEST_CASE("3x3 eigenvalues: diagonal and rank-one checks", "[operators][oracle]") {
    const auto d = SymMatrix<3>::diag({-2.0, 0.5, 3.0}).eigenvalues();
    REQUIRE(d[0] == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE(d[1] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(d[2] == Catch::Approx(3.0).margin(1e-12));

    // spectrum of a*v v^T with |v|=1 is {0, 0, a}
    Vec<3> v{2.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0};
    const auto r = SymMatrix<3>::outer(5.0, v).eigenvalues();
    REQUIRE(r[0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(r[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(r[2] == Catch::Approx(5.0).margin(1e-12));
}

TEST_CASE("ellipticity_gap", "[operators]") {
    SECTION("equality case: -Laplacian with Y = I") {
        const auto lap = EllipticOperator::neg_laplacian();
        Rng rng(11);
        for (int i = 0; i < 20; ++i) {
            const auto [lo, hi] = ellipticity_gap(lap, detail::random_sym(rng),
                                                  SymMatrix<2>::identity());
            REQUIRE(lo == Catch::Approx(0.0).margin(1e-13));
            REQUIRE(hi == Catch::Approx(0.0).margin(1e-13));
        }
    }

    SECTION("Pucci example: X=0, Y=diag(1,0)") {
        const auto pm = EllipticOperator::pucci_minus(1.0, 2.0);
        const auto [lo, hi] = ellipticity_gap(pm, SymMatrix<2>::zero(), SymMatrix<2>::diag({1.0, 0.0}));
        REQUIRE(lo == Catch::Approx(1.0).margin(1e-13));
        REQUIRE(hi == Catch::Approx(0.0).margin(1e-13));
    }

    SECTION("non-PSD Y is rejected") {
        const auto pm = EllipticOperator::pucci_minus(1.0, 2.0);
        REQUIRE_THROWS_AS(
            ellipticity_gap(pm, SymMatrix<2>::zero(), SymMatrix<2>::diag({1.0, -0.1})),
            DomainError);
    }

    SECTION("randomized slacks stay nonnegative") {
        const auto res = suite_ellipticity_gap(101, 100);
        INFO(res.name << " max violation " << res.max_violation);
        REQUIRE(res.pass);
    }
}

TEST_CASE("pucci_sandwich", "[operators]") {
    const auto pm = EllipticOperator::pucci_minus(1.0, 2.0);

    SECTION("Y = 0 gives zero slacks") {
        Rng rng(3);
        const auto [lo, hi] = pucci_sandwich(pm, detail::random_sym(rng), SymMatrix<2>::zero());
        REQUIRE(lo == Catch::Approx(0.0).margin(1e-13));
        REQUIRE(hi == Catch::Approx(0.0).margin(1e-13));
    }

    SECTION("-Laplacian degenerate sandwich is tight") {
        const auto lap = EllipticOperator::neg_laplacian();
        Rng rng(5);
        for (int i = 0; i < 50; ++i) {
            const auto [lo, hi] = pucci_sandwich(lap, detail::random_sym(rng), detail::random_sym(rng));
            REQUIRE(lo == Catch::Approx(0.0).margin(1e-13));
            REQUIRE(hi == Catch::Approx(0.0).margin(1e-13));
        }
    }

    SECTION("worked example: X=diag(1,0), Y=diag(-1,1)") {
        const auto [lo, hi] = pucci_sandwich(pm, SymMatrix<2>::diag({1.0, 0.0}),
                                             SymMatrix<2>::diag({-1.0, 1.0}));
        REQUIRE(lo == Catch::Approx(1.0).margin(1e-13));
        REQUIRE(hi == Catch::Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("rescaled_op", "[operators]") {
    const auto pm = EllipticOperator::pucci_minus(1.0, 2.0);

    SECTION("a = 1 is the identity rescaling") {
        const auto r = rescaled_op<2>(pm, 1.0);
        Rng rng(17);
        for (int i = 0; i < 20; ++i) {
            const auto x = detail::random_sym(rng);
            REQUIRE(r(x) == eval_F(pm, x));
        }
    }

    SECTION("worked example: a = 3 on diag(1,-1)") {
        const auto r = rescaled_op<2>(pm, 3.0);
        REQUIRE(r(SymMatrix<2>::diag({1.0, -1.0})) == Catch::Approx(-1.0).margin(1e-13));
    }

    SECTION("nonpositive scale is rejected") {
        REQUIRE_THROWS_AS(rescaled_op<2>(EllipticOperator::neg_laplacian(), 0.0), DomainError);
        REQUIRE_THROWS_AS(rescaled_op<2>(pm, -2.0), DomainError);
    }
}

TEST_CASE("operator property suites", "[operators][property]") {
    for (const auto& res : run_operator_property_suites(424242, 1000)) {
        INFO(res.name << " max violation " << res.max_violation << " tol " << res.tolerance);
        REQUIRE(res.pass);
    }
}

TEST_CASE("P- <= F <= P+ with matching constants", "[operators][property]") {
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        const double lam = rng.uniform(0.2, 2.0);
        const double Lam = lam + rng.uniform(0.0, 3.0);
        const EllipticityConstants c(lam, Lam);
        const auto x = detail::random_sym(rng);
        for (const auto& op :
             {EllipticOperator::pucci_minus(lam, Lam), EllipticOperator::pucci_plus(lam, Lam)}) {
            const double f = eval_F(op, x);
            REQUIRE(f >= pucci_minus_of(x, c) - 1e-12);
            REQUIRE(f <= pucci_plus_of(x, c) + 1e-12);
        }
        // the Laplacian against unit constants
        const double f = eval_F(EllipticOperator::neg_laplacian(), x);
        const EllipticityConstants unit(1.0, 1.0);
        REQUIRE(f >= pucci_minus_of(x, unit) - 1e-12);
        REQUIRE(f <= pucci_plus_of(x, unit) + 1e-12);
    }
}
