#pragma once

#include <cmath>
#include <vector>

#include "degel/fd.hpp"
#include "degel/grid.hpp"
#include "degel/io.hpp"
#include "degel/problem.hpp"
#include "degel/solver.hpp"
#include "degel/sym.hpp"

namespace degel {

template <int D>
struct EquivalenceResult {
    ScalarField<D> u_degenerate;
    ScalarField<D> u_limit;
    SolveReport report_degenerate;
    SolveReport report_limit;
    double max_gap = 0.0;
};

/// Solves the degenerate problem (f = 0) and the gradient-free problem
/// A(D^2 u) = 0 with identical boundary data and grid, and reports the
/// max-norm interior gap between the two solutions.
template <int D>
inline EquivalenceResult<D> lemma_equivalence(const ProblemSpec<D>& spec, SolveOptions opt = {}) {
    const Grid<D> probe(spec.n, spec.stencil_radius);
    {
        ScalarField<D> fcheck(std::make_shared<const Grid<D>>(probe));
        for (std::size_t idx : fcheck.grid().interior())
            if (spec.f(fcheck.grid().coords(idx)) != 0.0)
                throw ConfigError("equivalence: requires f = 0");
    }
    auto [ud, rd] = solve(spec, opt);

    ProblemSpec<D> pure = spec;
    pure.gamma = 0.0;
    pure.p = zero_vec<D>();
    auto [ul, rl] = solve(pure, opt);

    double gap = 0.0;
    for (std::size_t idx : ud.grid().interior()) gap = std::max(gap, std::abs(ud[idx] - ul[idx]));
    return {std::move(ud), std::move(ul), rd, rl, gap};
}

/// One quadratic test function phi(x) = 0.5 <A x, x> + b.x.
template <int D>
struct QuadraticTest {
    SymMatrix<D> a;
    Vec<D> b = zero_vec<D>();
};

enum class TouchSide { Below, Above };

template <int D>
struct TouchingEvent {
    std::size_t node = 0;
    Vec<D> x = zero_vec<D>();
    int test_id = 0;
    TouchSide side = TouchSide::Below;
    double slack = 0.0; // >= -tol when the viscosity inequality holds
    bool violation = false;
};

template <int D>
struct TouchingReport {
    std::vector<TouchingEvent<D>> events;
    double tol = 0.0;
    int violations = 0;
};

/// Default test catalogue: +-I and +-diag(1,-1) rotated by 0/30/45/60 degrees,
/// scaled by {1/2, 1, 2}. Slopes b are supplied separately by the caller.
template <int D>
inline std::vector<SymMatrix<D>> default_test_hessians() {
    std::vector<SymMatrix<D>> out;
    const double scales[3] = {0.5, 1.0, 2.0};
    for (double s : scales) {
        out.push_back(s * SymMatrix<D>::identity());
        out.push_back(-s * SymMatrix<D>::identity());
        if constexpr (D == 2) {
            const double angles[4] = {0.0, M_PI / 6.0, M_PI / 4.0, M_PI / 3.0};
            for (double th : angles) {
                const Vec<2> e1{std::cos(th), std::sin(th)};
                const Vec<2> e2{-std::sin(th), std::cos(th)};
                SymMatrix<2> a = SymMatrix<2>::outer(s, e1);
                a += SymMatrix<2>::outer(-s, e2);
                out.push_back(a);
                out.push_back(-1.0 * a);
            }
        } else {
            Vec<D> dvec = zero_vec<D>();
            dvec[0] = s;
            for (int i = 1; i < D; ++i) dvec[i] = -s;
            out.push_back(SymMatrix<D>::diag(dvec));
            out.push_back(-1.0 * SymMatrix<D>::diag(dvec));
        }
    }
    return out;
}

/// Gradient values observed in the field (coarsely quantized and deduplicated)
/// plus zero; the slope menu for the touching tests.
template <int D>
inline std::vector<Vec<D>> observed_slopes(const ScalarField<D>& u, std::size_t cap = 24) {
    std::vector<Vec<D>> out;
    out.push_back(zero_vec<D>());
    const auto interior = u.grid().interior();
    const std::size_t stride = std::max<std::size_t>(1, interior.size() / cap);
    for (std::size_t k = 0; k < interior.size(); k += stride) {
        const Vec<D> gr = gradient(u, interior[k]);
        bool dup = false;
        for (const auto& q : out)
            if (norm2(q - gr) < 1e-9) dup = true;
        if (!dup) out.push_back(gr);
    }
    return out;
}

/// One row per touching event: node coordinates, test id, side, slack.
template <int D>
inline std::string touching_csv(const TouchingReport<D>& rep) {
    std::vector<std::string> header;
    const char* cn[3] = {"x", "y", "z"};
    for (int a = 0; a < D; ++a) header.push_back(cn[a]);
    header.insert(header.end(), {"test_id", "side", "slack", "violation"});
    CsvWriter csv(header);
    for (const auto& ev : rep.events) {
        std::vector<std::string> cells;
        for (int a = 0; a < D; ++a) cells.push_back(float17(ev.x[a]));
        cells.push_back(std::to_string(ev.test_id));
        cells.push_back(ev.side == TouchSide::Below ? "below" : "above");
        cells.push_back(float17(ev.slack));
        cells.push_back(ev.violation ? "1" : "0");
        csv.row(cells);
    }
    return csv.str();
}

/// Discrete sub/supersolution check against quadratic test functions.
///
/// A node is a touching point from below (above) when u - phi attains a
/// non-strict minimum (maximum) over the full stencil neighborhood there.
/// At such nodes the viscosity inequalities for |p + ∇phi|^gamma A(D^2 phi) = f
/// are checked with slack tolerance tol = 10h:
///   below: f - m A(phi) >= -tol (supersolution side),
///   above: m A(phi) - f >= -tol (subsolution side),
/// where m = |p + ∇phi(x)|^gamma and A = -F. Only events are recorded; a
/// violation is an event whose slack is below -tol.
template <int D>
inline TouchingReport<D> touching_check(const ScalarField<D>& u, double gamma, const Vec<D>& p,
                                        const EllipticOperator& op,
                                        const std::vector<QuadraticTest<D>>& tests,
                                        std::function<double(const Vec<D>&)> f =
                                            [](const Vec<D>&) { return 0.0; },
                                        double tol = -1.0) {
    const Grid<D>& g = u.grid();
    const DirectionSet<D> dirs(g.stencil_radius());
    if (tol < 0.0) tol = 10.0 * g.h();

    TouchingReport<D> rep;
    rep.tol = tol;
    const double h = g.h();

    for (std::size_t idx : g.interior()) {
        const Vec<D> x = g.coords(idx);
        for (int t = 0; t < int(tests.size()); ++t) {
            const auto& q = tests[t];
            auto diff = [&](const Vec<D>& y) {
                return 0.5 * q.a.quad(y) + dot(q.b, y);
            };
            const double base = u[idx] - diff(x);
            bool is_min = true, is_max = true;
            for (const auto& e : dirs.directions()) {
                Vec<D> step;
                for (int a = 0; a < D; ++a) step[a] = h * e[a];
                const std::ptrdiff_t off = g.offset(e);
                const double up = u[std::size_t(std::ptrdiff_t(idx) + off)] - diff(x + step);
                const double dn = u[std::size_t(std::ptrdiff_t(idx) - off)] - diff(x - step);
                if (up < base || dn < base) is_min = false;
                if (up > base || dn > base) is_max = false;
                if (!is_min && !is_max) break;
            }
            if (!is_min && !is_max) continue;

            const Vec<D> grad_phi = q.a.apply(x) + q.b + p;
            const double m = gradient_multiplier(norm2(grad_phi), gamma);
            const double diffusion = -eval_F(op, q.a);
            const double fx = f(x);
            if (is_min) {
                TouchingEvent<D> ev;
                ev.node = idx;
                ev.x = x;
                ev.test_id = t;
                ev.side = TouchSide::Below;
                ev.slack = fx - m * diffusion;
                ev.violation = ev.slack < -tol;
                rep.events.push_back(ev);
                if (ev.violation) ++rep.violations;
            }
            if (is_max) {
                TouchingEvent<D> ev;
                ev.node = idx;
                ev.x = x;
                ev.test_id = t;
                ev.side = TouchSide::Above;
                ev.slack = m * diffusion - fx;
                ev.violation = ev.slack < -tol;
                rep.events.push_back(ev);
                if (ev.violation) ++rep.violations;
            }
        }
    }
    return rep;
}

} // namespace degel
