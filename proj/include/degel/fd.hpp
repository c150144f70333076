#pragma once

#include <cmath>
#include <vector>

#include "degel/grid.hpp"
#include "degel/operators.hpp"
#include "degel/problem.hpp"
#include "degel/stencil.hpp"

namespace degel {

/// 3-point directional second difference (u(x+he) - 2u(x) + u(x-he)) / (h|e|)^2,
/// consistent with <D²u ê, ê> to O(h²) and exact on quadratics.
template <int D>
inline double second_diff(const ScalarField<D>& u, std::size_t idx, const IVec<D>& e) {
    const Grid<D>& g = u.grid();
    const std::ptrdiff_t off = g.offset(e);
    const double denom = g.h() * g.h() * norm2sq<D>(e);
    return (u[std::size_t(std::ptrdiff_t(idx) + off)] - 2.0 * u[idx] +
            u[std::size_t(std::ptrdiff_t(idx) - off)]) /
           denom;
}

/// Centered difference gradient, O(h²)-consistent, exact on quadratics.
template <int D>
inline Vec<D> gradient(const ScalarField<D>& u, std::size_t idx) {
    const Grid<D>& g = u.grid();
    Vec<D> gr;
    std::ptrdiff_t stride = 1;
    for (int a = D - 1; a >= 0; --a) {
        gr[a] = (u[std::size_t(std::ptrdiff_t(idx) + stride)] -
                 u[std::size_t(std::ptrdiff_t(idx) - stride)]) /
                (2.0 * g.h());
        stride *= g.n();
    }
    return gr;
}

namespace detail {

/// Extremal value over one orthogonal frame: per direction the weight is
/// lambda or Lambda, whichever extremizes; signbit picks min (P^-) vs max (P^+).
template <int D>
inline double frame_extremal(const double* s, const std::array<int, D>& frame,
                             const EllipticityConstants& c, bool take_min) {
    double acc = 0.0;
    for (int k = 0; k < D; ++k) {
        const double sd = s[frame[k]];
        // contribution of -a*sd with a in {lambda, Lambda}
        if (take_min)
            acc -= (sd >= 0.0) ? c.Lambda * sd : c.lambda * sd;
        else
            acc -= (sd >= 0.0) ? c.lambda * sd : c.Lambda * sd;
    }
    return acc;
}

} // namespace detail

/// Monotone wide-stencil value of F(D²u) at an interior node.
///
/// NegLaplacian: -sum of axis second differences. Pucci: extremum over the
/// orthogonal frames of the direction set, with per-direction weights in
/// {lambda, Lambda}; exact whenever the Hessian's eigenvectors align with a
/// frame, within the angular resolution otherwise. Nonincreasing in every
/// neighbor value (degenerate ellipticity of the scheme).
template <int D>
inline double discrete_F(const EllipticOperator& op, const ScalarField<D>& u, std::size_t idx,
                         const DirectionSet<D>& dirs) {
    if (op.kind == OperatorKind::NegLaplacian) {
        double acc = 0.0;
        for (int a = 0; a < D; ++a) acc -= second_diff(u, idx, dirs.directions()[dirs.axis(a)]);
        return acc;
    }
    const std::size_t m = dirs.size();
    double s[64];
    for (std::size_t j = 0; j < m; ++j) s[j] = second_diff(u, idx, dirs.directions()[j]);
    const bool take_min = (op.kind == OperatorKind::PucciMinus);
    double best = take_min ? 1e300 : -1e300;
    for (const auto& frame : dirs.frames()) {
        const double v = detail::frame_extremal<D>(s, frame, op.constants, take_min);
        best = take_min ? std::min(best, v) : std::max(best, v);
    }
    return best;
}

/// Diffusion-oriented operator value A(u) = -discrete_F(u); A = Δ_h for the
/// Laplacian kind. This is the orientation the equation A-form uses.
template <int D>
inline double diffusion_value(const EllipticOperator& op, const ScalarField<D>& u,
                              std::size_t idx, const DirectionSet<D>& dirs) {
    return -discrete_F(op, u, idx, dirs);
}

/// |p + ∇u|^gamma with the cheap small-integer powers special-cased.
inline double gradient_multiplier(double gnorm, double gamma) {
    if (gamma == 0.0) return 1.0;
    if (gamma == 1.0) return gnorm;
    if (gamma == 2.0) return gnorm * gnorm;
    return std::pow(gnorm, gamma);
}

/// Discrete residual of |p + ∇u|^gamma A(D²u) = f on the interior.
/// Exterior and band entries of the returned field are zero.
template <int D>
inline ScalarField<D> residual(const ProblemSpec<D>& spec, const ScalarField<D>& u) {
    const Grid<D>& g = u.grid();
    const DirectionSet<D> dirs = spec.make_directions();
    ScalarField<D> r(u.grid_ptr());
    for (std::size_t idx : g.interior()) {
        const Vec<D> grad = gradient(u, idx) + spec.p;
        const double mult = gradient_multiplier(norm2<D>(grad), spec.gamma);
        r[idx] = mult * diffusion_value(spec.op, u, idx, dirs) - spec.f(g.coords(idx));
    }
    return r;
}

} // namespace degel
