#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "degel/errors.hpp"
#include "degel/grid.hpp"
#include "degel/operators.hpp"
#include "degel/stencil.hpp"

namespace degel {

/// Right-hand-side constant of the closed-form family u = |x|^{1+alpha}:
///   |∇u|^gamma Δu = C |x|^{(1+alpha)(1+gamma)-(gamma+2)},
///   C = (1+alpha)^{1+gamma} (d + alpha - 1).
/// With alpha = 1/(1+gamma) the exponent vanishes and the right-hand side is
/// the constant C.
inline double radial_power_rhs_constant(double gamma, int d, double alpha) {
    return std::pow(1.0 + alpha, 1.0 + gamma) * (double(d) + alpha - 1.0);
}

inline double radial_power_rhs_constant(double gamma, int d) {
    return radial_power_rhs_constant(gamma, d, 1.0 / (1.0 + gamma));
}

/// Full problem instance for |p + ∇u|^gamma A(D²u) = f on the unit ball,
/// where A = -F is the diffusion form of the elliptic operator (A = Δ for the
/// Laplacian kind). Dirichlet data g is imposed on the whole boundary band.
template <int D>
struct ProblemSpec {
    double gamma = 0.0;
    Vec<D> p = zero_vec<D>();
    EllipticOperator op;
    std::function<double(const Vec<D>&)> f = [](const Vec<D>&) { return 0.0; };
    std::function<double(const Vec<D>&)> boundary = [](const Vec<D>&) { return 0.0; };
    int n = 65;
    int stencil_radius = 2;

    void validate() const {
        if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
        if (n < 2 * stencil_radius + 3)
            throw ConfigError("grid resolution too small for stencil radius: need n >= 2W+3");
    }

    std::shared_ptr<const Grid<D>> make_grid() const {
        validate();
        return std::make_shared<const Grid<D>>(n, stencil_radius);
    }

    DirectionSet<D> make_directions() const { return DirectionSet<D>(stencil_radius); }

    /// f sampled on the interior; throws if unbounded there.
    ScalarField<D> sample_f(std::shared_ptr<const Grid<D>> grid) const {
        ScalarField<D> ff = ScalarField<D>::sample(std::move(grid), f);
        if (!ff.all_finite()) throw ConfigError("right-hand side f is not finite on the grid");
        return ff;
    }

    /// Field holding boundary data on the band (zero elsewhere).
    ScalarField<D> sample_boundary(std::shared_ptr<const Grid<D>> grid) const {
        ScalarField<D> g(grid);
        for (std::size_t idx : grid->band()) {
            g[idx] = boundary(grid->coords(idx));
            if (!std::isfinite(g[idx])) throw ConfigError("boundary data is not finite on the band");
        }
        return g;
    }
};

} // namespace degel
