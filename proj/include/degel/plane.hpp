#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "degel/errors.hpp"
#include "degel/grid.hpp"
#include "degel/vec.hpp"

namespace degel {

template <int D>
struct BestPlane {
    double phi = 0.0;   // min_p osc(u - p.z) over the node set
    Vec<D> p = zero_vec<D>(); // a minimizing slope (any, if non-unique)
};

namespace detail {

/// Dense LU solve with partial pivoting for the tiny (D+2)x(D+2) basis systems.
template <int R>
struct TinyLU {
    double a[R][R];
    int perm[R];
    bool ok = false;

    void factor(const double m[R][R]) {
        for (int i = 0; i < R; ++i) {
            perm[i] = i;
            for (int j = 0; j < R; ++j) a[i][j] = m[i][j];
        }
        ok = true;
        for (int c = 0; c < R; ++c) {
            int piv = c;
            for (int r = c + 1; r < R; ++r)
                if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
            if (std::abs(a[piv][c]) < 1e-13) {
                ok = false;
                return;
            }
            if (piv != c) {
                for (int j = 0; j < R; ++j) std::swap(a[c][j], a[piv][j]);
                std::swap(perm[c], perm[piv]);
            }
            const double inv = 1.0 / a[c][c];
            for (int r = c + 1; r < R; ++r) {
                const double f = a[r][c] * inv;
                a[r][c] = f;
                for (int j = c + 1; j < R; ++j) a[r][j] -= f * a[c][j];
            }
        }
    }

    void solve(const double b[R], double x[R]) const {
        double y[R];
        for (int i = 0; i < R; ++i) y[i] = b[perm[i]];
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < i; ++j) y[i] -= a[i][j] * y[j];
        for (int i = R - 1; i >= 0; --i) {
            for (int j = i + 1; j < R; ++j) y[i] -= a[i][j] * y[j];
            y[i] /= a[i][i];
        }
        for (int i = 0; i < R; ++i) x[i] = y[i];
    }

    void solve_transposed(const double b[R], double x[R]) const {
        // (PA)^T = A^T P^T; forward with U^T, back with L^T, then unpermute
        double y[R];
        for (int i = 0; i < R; ++i) y[i] = b[i];
        for (int i = 0; i < R; ++i) {
            for (int j = 0; j < i; ++j) y[i] -= a[j][i] * y[j];
            y[i] /= a[i][i];
        }
        for (int i = R - 1; i >= 0; --i)
            for (int j = i + 1; j < R; ++j) y[i] -= a[j][i] * y[j];
        for (int i = 0; i < R; ++i) x[perm[i]] = y[i];
    }
};

} // namespace detail

/// Chebyshev (minimax) plane fit by linear programming, exact up to simplex
/// pivot tolerances:
///
///   phi = min_p [ max_i (u_i - p.z_i) - min_i (u_i - p.z_i) ].
///
/// Solved on the dual: maximize <u, y+> - <u, y-> over probability vectors
/// y+, y- on the nodes with equal barycenters. The optimal equality
/// multipliers recover (p, lo, hi). Needs at least D+2 nodes that affinely
/// span R^D. Returned phi is re-evaluated at the returned slope, so it is
/// always attained.
template <int D>
inline BestPlane<D> best_plane_fit(const std::vector<Vec<D>>& z, const std::vector<double>& u) {
    constexpr int R = D + 2;
    const std::size_t n = z.size();
    if (n != u.size()) throw DomainError("best_plane_fit: size mismatch");
    if (n < std::size_t(R)) throw DomainError("best_plane_fit: need at least d+2 nodes");

    double uscale = 1.0;
    for (double v : u) uscale = std::max(uscale, std::abs(v));
    const double rc_tol = 1e-11 * uscale;

    // column id: 2*i for y+_i, 2*i+1 for y-_i
    auto column = [&](std::uint32_t id, double out[R]) {
        const std::size_t i = id >> 1;
        const bool plus = (id & 1u) == 0;
        const double sgn = plus ? 1.0 : -1.0;
        for (int a = 0; a < D; ++a) out[a] = sgn * z[i][a];
        out[D] = plus ? 0.0 : -1.0;
        out[D + 1] = plus ? 1.0 : 0.0;
    };
    auto gain = [&](std::uint32_t id) {
        const std::size_t i = id >> 1;
        return ((id & 1u) == 0) ? u[i] : -u[i];
    };

    // initial basis: both columns of the max-value node, then any columns
    // completing the rank (their basic values start at zero)
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (u[i] > u[i0]) i0 = i;

    std::uint32_t basis[R];
    int nb = 0;
    basis[nb++] = std::uint32_t(2 * i0);
    basis[nb++] = std::uint32_t(2 * i0 + 1);
    {
        // modified Gram-Schmidt over candidate columns to complete the rank
        std::vector<std::array<double, R>> q; // orthonormal span of chosen columns
        auto try_add = [&](std::uint32_t id, bool record) {
            std::array<double, R> w;
            column(id, w.data());
            for (const auto& e : q) {
                double proj = 0.0;
                for (int a = 0; a < R; ++a) proj += w[a] * e[a];
                for (int a = 0; a < R; ++a) w[a] -= proj * e[a];
            }
            double norm = 0.0;
            for (int a = 0; a < R; ++a) norm += w[a] * w[a];
            norm = std::sqrt(norm);
            if (norm <= 1e-9) return false;
            for (int a = 0; a < R; ++a) w[a] /= norm;
            q.push_back(w);
            if (record) basis[nb++] = id;
            return true;
        };
        try_add(basis[0], false);
        try_add(basis[1], false);
        for (std::size_t i = 0; i < n && nb < R; ++i) {
            if (i == i0) continue;
            try_add(std::uint32_t(2 * i), true);
            if (nb < R) try_add(std::uint32_t(2 * i + 1), true);
        }
        if (nb < R) throw DomainError("best_plane_fit: nodes do not affinely span");
    }

    std::vector<std::uint8_t> in_basis(2 * n, 0);
    for (int k = 0; k < R; ++k) in_basis[basis[k]] = 1;

    double B[R][R];
    detail::TinyLU<R> lu;
    double yb[R], pi[R];
    double rhs[R];
    for (int a = 0; a < D; ++a) rhs[a] = 0.0;
    rhs[D] = -1.0;
    rhs[D + 1] = 1.0;

    auto refactor = [&]() {
        double col[R];
        for (int k = 0; k < R; ++k) {
            column(basis[k], col);
            for (int r = 0; r < R; ++r) B[r][k] = col[r];
        }
        lu.factor(B);
        if (!lu.ok) throw NumericalFailure("best_plane_fit: singular basis");
    };

    const long long max_iters = 400 + 50 * (long long)n;
    long long degenerate_run = 0;
    bool bland = false;

    refactor();
    for (long long iter = 0;; ++iter) {
        if (iter > max_iters) throw NumericalFailure("best_plane_fit: iteration limit");
        lu.solve(rhs, yb);
        // basic gains -> multipliers
        double gb[R];
        for (int k = 0; k < R; ++k) gb[k] = gain(basis[k]);
        lu.solve_transposed(gb, pi);

        // price nonbasic columns
        std::uint32_t enter = UINT32_MAX;
        double best_rc = rc_tol;
        for (std::uint32_t id = 0; id < 2 * n; ++id) {
            if (in_basis[id]) continue;
            const std::size_t i = id >> 1;
            double dotp = 0.0;
            for (int a = 0; a < D; ++a) dotp += pi[a] * z[i][a];
            const double rc = ((id & 1u) == 0) ? (u[i] - dotp - pi[D + 1])
                                               : (-u[i] + dotp + pi[D]);
            if (bland) {
                if (rc > rc_tol) {
                    enter = id;
                    break;
                }
            } else if (rc > best_rc) {
                best_rc = rc;
                enter = id;
            }
        }
        if (enter == UINT32_MAX) break; // optimal

        double w[R], col[R];
        column(enter, col);
        lu.solve(col, w);
        int leave = -1;
        double theta = 0.0;
        for (int k = 0; k < R; ++k) {
            if (w[k] > 1e-12) {
                const double t = std::max(yb[k], 0.0) / w[k];
                if (leave < 0 || t < theta - 1e-15 ||
                    (t < theta + 1e-15 && basis[k] < basis[leave])) {
                    leave = k;
                    theta = t;
                }
            }
        }
        if (leave < 0) throw NumericalFailure("best_plane_fit: unbounded pivot");
        degenerate_run = (theta <= 1e-14) ? degenerate_run + 1 : 0;
        if (degenerate_run > 4 * R) bland = true; // anti-cycling fallback

        in_basis[basis[leave]] = 0;
        basis[leave] = enter;
        in_basis[enter] = 1;
        refactor();
    }

    BestPlane<D> out;
    for (int a = 0; a < D; ++a) out.p[a] = pi[a];
    double lo = u[0] - dot<D>(out.p, z[0]), hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
        const double v = u[i] - dot<D>(out.p, z[i]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.phi = hi - lo;
    return out;
}

/// Minimax plane over the discrete ball B_r(center): phi and a minimizing p.
template <int D>
inline BestPlane<D> best_plane_osc(const ScalarField<D>& u, const Vec<D>& center, double r) {
    const std::vector<std::size_t> nodes = u.grid().ball(center, r);
    if (nodes.size() < std::size_t(D + 2))
        throw DomainError("best_plane_osc: ball holds fewer than d+2 nodes");
    std::vector<Vec<D>> z;
    std::vector<double> vals;
    z.reserve(nodes.size());
    vals.reserve(nodes.size());
    for (std::size_t idx : nodes) {
        z.push_back(u.grid().coords(idx));
        vals.push_back(u[idx]);
    }
    return best_plane_fit<D>(z, vals);
}

} // namespace degel
