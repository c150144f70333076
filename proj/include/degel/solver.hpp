#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "degel/fd.hpp"
#include "degel/grid.hpp"
#include "degel/problem.hpp"

namespace degel {

struct SolveReport {
    long long iterations = 0;
    double final_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    double tol = 0.0; // resolved tolerance the run used
    double dt_min = 0.0;
    double dt_max = 0.0;
    double dt_final = 0.0;
    double wall_seconds = 0.0;
};

struct SolveOptions {
    // < 0: use 1e-8 * max(1, ||f||_inf, seed multiplier max); the residual
    // scales with |p + grad u|^gamma, so a fixed absolute tolerance would be
    // unreachable for large slopes
    double tol = -1.0;
    long long max_iters = 1000000;
    double multiplier_floor = 1e-6; // keeps dt finite where |p + ∇u| ~ 0
    // The gradient norm entering the multiplier is floored at grad_floor_h * h.
    // The floor vanishes with h (consistent) and keeps the discrete problem
    // nondegenerate: without it the equation has no reachable fixed point at
    // nodes where the centered gradient cancels exactly. The default keeps the
    // floored diffusion within a small factor of the sampled one at such
    // nodes, so the local defect stays well below the discretization error.
    double grad_floor_h = 4.0;
};

namespace detail {

/// Largest per-frame sum of 1/|e|^2; together with Lambda it bounds the
/// diagonal of any admissible frozen-coefficient sweep.
template <int D>
inline double frame_cfl_weight(const DirectionSet<D>& dirs) {
    double s_max = 0.0;
    for (const auto& frame : dirs.frames()) {
        double s = 0.0;
        for (int k = 0; k < D; ++k) s += 1.0 / norm2sq<D>(dirs.directions()[frame[k]]);
        s_max = std::max(s_max, s);
    }
    return s_max;
}

/// Harmonic-like seed: band data averaged with the ball's Poisson kernel
/// (1-|x|^2)/|x-b|^d. Cheap, and already near the fixed point for
/// harmonic-ish boundary data.
template <int D>
inline void seed_interior(const Grid<D>& grid, const ScalarField<D>& gband, ScalarField<D>& u) {
    const double h = grid.h();
    for (std::size_t idx : grid.interior()) {
        const Vec<D> x = grid.coords(idx);
        const double head = std::max(1.0 - norm2sq<D>(x), 0.0);
        double num = 0.0, den = 0.0;
        for (std::size_t b : grid.band()) {
            Vec<D> dxb = grid.coords(b) - x;
            const double dist = std::max(norm2<D>(dxb), h);
            double k = head;
            for (int a = 0; a < D; ++a) k /= dist;
            num += k * gband[b];
            den += k;
        }
        u[idx] = den > 0.0 ? num / den : 0.0;
    }
}

} // namespace detail

/// Monotone explicit relaxation for |p + ∇u|^gamma A(D²u) = f with Dirichlet
/// data on the band:  u <- u + dt (m(u) A_h(u) - f), multiplier
/// m(u) = max(|p + ∇u|, grad_floor_h * h)^gamma frozen per sweep,
/// dt = h^2 / (2 Lambda S max(G, floor)) with S = max_frame sum 1/|e|^2 and
/// G = max_interior m, so every sweep is nondecreasing in each neighbor value.
/// Converged means the max-norm residual of the floored scheme dropped below
/// tol; non-convergence is reported, not thrown.
template <int D>
inline std::pair<ScalarField<D>, SolveReport> solve(const ProblemSpec<D>& spec,
                                                    SolveOptions opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto grid = spec.make_grid();
    const Grid<D>& g = *grid;
    const DirectionSet<D> dirs = spec.make_directions();

    const ScalarField<D> ffield = spec.sample_f(grid);
    const ScalarField<D> gband = spec.sample_boundary(grid);

    const double f_inf = ffield.max_abs(g.interior());

    ScalarField<D> u(grid);
    for (std::size_t b : g.band()) u[b] = gband[b];
    detail::seed_interior(g, gband, u);
    ScalarField<D> unew = u;

    const auto interior = g.interior();
    const std::size_t ni = interior.size();
    std::vector<double> fvals(ni);
    for (std::size_t k = 0; k < ni; ++k) fvals[k] = ffield[interior[k]];

    // flattened stencil tables
    const std::size_t ndirs = dirs.size();
    std::vector<std::ptrdiff_t> off(ndirs);
    std::vector<double> invd(ndirs);
    const double h = g.h();
    for (std::size_t j = 0; j < ndirs; ++j) {
        off[j] = g.offset(dirs.directions()[j]);
        invd[j] = 1.0 / (h * h * norm2sq<D>(dirs.directions()[j]));
    }
    std::ptrdiff_t axis_stride[D];
    {
        std::ptrdiff_t s = 1;
        for (int a = D - 1; a >= 0; --a) {
            axis_stride[a] = s;
            s *= g.n();
        }
    }
    const bool laplace = (spec.op.kind == OperatorKind::NegLaplacian);
    const bool take_min = (spec.op.kind == OperatorKind::PucciMinus);
    const double lam = spec.op.constants.lambda;
    const double Lam = spec.op.constants.Lambda;
    const double S = laplace ? double(D) : detail::frame_cfl_weight(dirs);
    const double inv2h = 1.0 / (2.0 * h);

    std::vector<double> mult(ni);
    SolveReport rep;
    rep.dt_min = std::numeric_limits<double>::infinity();
    const double grad_floor = opt.grad_floor_h * h;

    // per-node multiplier (with the gradient floor) and its interior max
    auto compute_multipliers = [&](const std::vector<double>& uv) {
        double G = 0.0;
        for (std::size_t k = 0; k < ni; ++k) {
            const std::ptrdiff_t i = std::ptrdiff_t(interior[k]);
            double gn2 = 0.0;
            for (int a = 0; a < D; ++a) {
                const double c = (uv[i + axis_stride[a]] - uv[i - axis_stride[a]]) * inv2h +
                                 spec.p[a];
                gn2 += c * c;
            }
            const double m =
                gradient_multiplier(std::max(std::sqrt(gn2), grad_floor), spec.gamma);
            mult[k] = m;
            G = std::max(G, m);
        }
        return G;
    };

    // fused residual + (optional) explicit update; returns the max-norm residual
    auto sweep = [&](const std::vector<double>& uv, std::vector<double>* nv, double dt) {
        double maxres = 0.0;
        for (std::size_t k = 0; k < ni; ++k) {
            const std::ptrdiff_t i = std::ptrdiff_t(interior[k]);
            double A;
            if (laplace) {
                double acc = 0.0;
                for (int a = 0; a < D; ++a)
                    acc += uv[i + axis_stride[a]] - 2.0 * uv[i] + uv[i - axis_stride[a]];
                A = acc / (h * h);
            } else {
                double s[DirectionSet<D>::kMaxDirections];
                for (std::size_t j = 0; j < ndirs; ++j)
                    s[j] = (uv[i + off[j]] - 2.0 * uv[i] + uv[i - off[j]]) * invd[j];
                double best = take_min ? 1e300 : -1e300;
                for (const auto& frame : dirs.frames()) {
                    double v = 0.0;
                    for (int a = 0; a < D; ++a) {
                        const double sd = s[frame[a]];
                        if (take_min)
                            v -= (sd >= 0.0) ? Lam * sd : lam * sd;
                        else
                            v -= (sd >= 0.0) ? lam * sd : Lam * sd;
                    }
                    best = take_min ? std::min(best, v) : std::max(best, v);
                }
                A = -best; // diffusion orientation
            }
            const double res = mult[k] * A - fvals[k];
            maxres = std::max(maxres, std::abs(res));
            if (nv) (*nv)[i] = uv[i] + dt * res;
        }
        return maxres;
    };

    // the residual scales with the gradient multiplier, so the default
    // tolerance carries the seed's multiplier size alongside ||f||
    const double g_seed = compute_multipliers(u.values());
    const double tol =
        opt.tol >= 0.0 ? opt.tol : 1e-8 * std::max({1.0, f_inf, g_seed});
    rep.tol = tol;

    double maxres = std::numeric_limits<double>::infinity();
    long long it = 0;
    while (it < opt.max_iters) {
        const double G = compute_multipliers(u.values());
        if (!std::isfinite(G)) throw NumericalFailure("solve: gradient multiplier overflowed");
        const double dt = h * h / (2.0 * Lam * S * std::max(G, opt.multiplier_floor));
        rep.dt_min = std::min(rep.dt_min, dt);
        rep.dt_max = std::max(rep.dt_max, dt);
        rep.dt_final = dt;

        maxres = sweep(u.values(), &unew.values(), dt);
        ++it;
        std::swap(u.values(), unew.values());
        if (!std::isfinite(maxres)) throw NumericalFailure("solve: residual became non-finite");
        if (maxres <= tol) break;
    }

    rep.iterations = it;
    compute_multipliers(u.values());
    rep.final_residual = sweep(u.values(), nullptr, 0.0);
    rep.converged = rep.final_residual <= tol;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), rep};
}

/// Result of the sup-norm normalization
///   kappa = (2||u||_inf + (||f||_inf / eps0)^{1/(1+gamma)})^{-1},
/// after which ||kappa u||_inf <= 1/2 and ||kappa^{1+gamma} f||_inf <= eps0.
/// When u and f both vanish kappa is reported as +inf and the fields pass
/// through untouched (trivial flag set).
template <int D>
struct KappaNormalization {
    double kappa = 0.0;
    ScalarField<D> u;
    ScalarField<D> f;
    bool trivial = false;
};

template <int D>
inline KappaNormalization<D> kappa_normalize(const ScalarField<D>& u, const ScalarField<D>& f,
                                             double eps0, double gamma) {
    if (!(eps0 > 0.0) || !(eps0 <= 1.0)) throw ConfigError("eps0 must lie in (0, 1]");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    const double nu = u.max_abs();
    const double nf = f.max_abs();
    KappaNormalization<D> out{0.0, u, f, false};
    if (nu == 0.0 && nf == 0.0) {
        out.kappa = std::numeric_limits<double>::infinity();
        out.trivial = true;
        return out;
    }
    const double kappa = 1.0 / (2.0 * nu + std::pow(nf / eps0, 1.0 / (1.0 + gamma)));
    out.kappa = kappa;
    const double kf = std::pow(kappa, 1.0 + gamma);
    for (double& v : out.u.values()) v *= kappa;
    for (double& v : out.f.values()) v *= kf;
    return out;
}

} // namespace degel
