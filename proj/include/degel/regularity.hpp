#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "degel/errors.hpp"
#include "degel/grid.hpp"
#include "degel/plane.hpp"
#include "degel/vec.hpp"

namespace degel {

/// Exact pairwise Holder seminorm sup |u(x)-u(y)| / |x-y|^beta over a node
/// set, O(|Q|^2).
template <int D>
inline double holder_seminorm(const ScalarField<D>& u, const std::vector<std::size_t>& q,
                              double beta) {
    if (!(beta > 0.0) || !(beta <= 1.0)) throw DomainError("holder_seminorm: beta must be in (0,1]");
    if (q.size() < 2) throw DomainError("holder_seminorm: need at least two nodes");
    const Grid<D>& g = u.grid();
    std::vector<Vec<D>> xs(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) xs[i] = g.coords(q[i]);
    double best = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            const double dist2 = norm2sq(xs[i] - xs[j]);
            const double num = std::abs(u[q[i]] - u[q[j]]);
            const double ratio = num / std::pow(dist2, 0.5 * beta);
            best = std::max(best, ratio);
        }
    }
    return best;
}

template <int D>
struct ProfileEntry {
    int k = 0;
    double r = 0.0;
    double phi = 0.0;
    Vec<D> p = zero_vec<D>();
};

/// Best-plane oscillation Phi(r_k) and minimizing slopes p_k at the dyadic
/// scales r_k = rho^k, k = 0..K, around x0. Scales whose ball is
/// under-resolved (radius < 4h or fewer than d+2 nodes) are dropped and the
/// truncation flagged.
template <int D>
struct OscillationProfile {
    Vec<D> center = zero_vec<D>();
    double rho = 0.5;
    std::vector<ProfileEntry<D>> entries;
    bool truncated = false;
};

template <int D>
inline OscillationProfile<D> oscillation_profile(const ScalarField<D>& u, const Vec<D>& x0,
                                                 double rho, int levels) {
    if (!(rho > 0.0) || !(rho < 1.0)) throw ConfigError("profile: rho must be in (0,1)");
    if (levels < 0) throw ConfigError("profile: K must be >= 0");
    const Grid<D>& g = u.grid();
    const double r_max = 1.0 + g.stencil_radius() * g.h();
    if (norm2(x0) + 1.0 > r_max + 1e-12)
        throw DomainError("profile: B_1(x0) leaves the sampled region");
    OscillationProfile<D> prof;
    prof.center = x0;
    prof.rho = rho;
    double r = 1.0;
    for (int k = 0; k <= levels; ++k, r *= rho) {
        if (r < 4.0 * g.h()) {
            prof.truncated = true;
            break;
        }
        const auto nodes = g.ball(x0, r);
        if (nodes.size() < std::size_t(D + 2)) {
            prof.truncated = true;
            break;
        }
        const BestPlane<D> bp = best_plane_osc(u, x0, r);
        prof.entries.push_back({k, r, bp.phi, bp.p});
    }
    return prof;
}

struct ExponentFit {
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double stderr_ = 0.0;
    double fit_residual = 0.0; // rms of log-log residuals
    int used_scales = 0;
    int excluded_scales = 0; // below the noise floor
};

/// Least-squares slope of log Phi vs log r, minus one. Scales with Phi at or
/// below the noise floor (10 eps relative to the largest Phi) are excluded.
template <int D>
inline ExponentFit fit_exponent(const OscillationProfile<D>& prof) {
    double phi_max = 0.0;
    for (const auto& e : prof.entries) phi_max = std::max(phi_max, e.phi);
    const double floor_ = 10.0 * std::numeric_limits<double>::epsilon() * std::max(phi_max, 1.0);
    std::vector<double> lx, ly;
    int excluded = 0;
    for (const auto& e : prof.entries) {
        if (e.phi > floor_) {
            lx.push_back(std::log(e.r));
            ly.push_back(std::log(e.phi));
        } else {
            ++excluded;
        }
    }
    const int m = int(lx.size());
    if (m < 3) throw InsufficientData("fit_exponent: fewer than 3 usable scales");
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = ly[i] - (slope * lx[i] + intercept);
        ss += r * r;
    }
    ExponentFit fit;
    fit.alpha = slope - 1.0;
    fit.stderr_ = (m > 2) ? std::sqrt(ss / double(m - 2) / sxx) : 0.0;
    fit.fit_residual = std::sqrt(ss / double(m));
    fit.used_scales = m;
    fit.excluded_scales = excluded;
    return fit;
}

template <int D>
struct FlatnessStep {
    Vec<D> p_next = zero_vec<D>();
    double osc_after = 0.0;
    double bound = 0.0; // rho / 2
    bool success = false;
};

/// One improvement-of-flatness measurement: best plane on B_rho(0) and the
/// check osc <= rho/2. Requires osc_{B_1} u <= 1. The slope p of the instance
/// is carried through for the trace; the measurement itself reads only u.
template <int D>
inline FlatnessStep<D> flatness_step(const ScalarField<D>& u, const Vec<D>& /*p*/, double rho) {
    if (!(rho > 0.0) || !(rho < 1.0)) throw ConfigError("flatness_step: rho must be in (0,1)");
    const Grid<D>& g = u.grid();
    const auto b1 = g.ball(zero_vec<D>(), 1.0);
    if (osc(u, b1) > 1.0 + 1e-12)
        throw DomainError("flatness_step: requires osc over B_1 at most 1");
    const BestPlane<D> bp = best_plane_osc(u, zero_vec<D>(), rho);
    FlatnessStep<D> out;
    out.p_next = bp.p;
    out.osc_after = bp.phi;
    out.bound = 0.5 * rho;
    out.success = bp.phi <= out.bound + 1e-12;
    return out;
}

template <int D>
struct FlatnessTraceRow {
    int k = 0;
    double r = 0.0;
    Vec<D> p = zero_vec<D>();
    double osc_val = 0.0;
    double bound = 0.0; // r^{1+alpha}
    bool bound_ok = false;
};

/// Iterated flatness trace. Starting from p_0 = 0, each level rescales
/// u_k(x) = r_k^{-1-alpha} [u(r_k x) - p_k.(r_k x)] onto the sub-lattice of
/// nodes falling inside B_{r_k} (restriction only, no interpolation), fits the
/// best plane on B_rho of the rescaled field, and folds the slope back:
/// p_{k+1} = p_k + r_k^alpha q. Records osc_{B_{r_k}}(u - p_k.x) against
/// r_k^{1+alpha}. Stops when a ball holds fewer than 10 nodes.
/// Requires alpha < 1/(1+gamma).
template <int D>
inline std::vector<FlatnessTraceRow<D>> flatness_iterate(const ScalarField<D>& u, double gamma,
                                                         double rho, double alpha,
                                                         int max_levels) {
    if (!(alpha > 0.0)) throw ConfigError("flatness_iterate: alpha must be > 0");
    if (!(alpha < 1.0 / (1.0 + gamma)))
        throw ConfigError("flatness_iterate: requires alpha < 1/(1+gamma)");
    if (!(rho > 0.0) || !(rho < 1.0)) throw ConfigError("flatness_iterate: rho must be in (0,1)");
    const Grid<D>& g = u.grid();

    std::vector<FlatnessTraceRow<D>> trace;
    Vec<D> p = zero_vec<D>();
    double r = 1.0;
    for (int k = 0; k <= max_levels; ++k, r *= rho) {
        const auto nodes = g.ball(zero_vec<D>(), r);
        if (nodes.size() < 10) break;

        FlatnessTraceRow<D> row;
        row.k = k;
        row.r = r;
        row.p = p;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t idx : nodes) {
            const double v = u[idx] - dot(p, g.coords(idx));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        row.osc_val = hi - lo;
        row.bound = std::pow(r, 1.0 + alpha);
        row.bound_ok = row.osc_val <= row.bound + 1e-12;
        trace.push_back(row);

        // rescaled field on the restriction: measuring the plane there is the
        // same LP as fitting on B_{r * rho} in original coordinates; fold back.
        const double scale = std::pow(r, -1.0 - alpha);
        const auto sub = g.ball(zero_vec<D>(), r * rho);
        if (sub.size() < std::size_t(D + 2)) break;
        std::vector<Vec<D>> z;
        std::vector<double> vals;
        z.reserve(sub.size());
        vals.reserve(sub.size());
        for (std::size_t idx : sub) {
            const Vec<D> x = g.coords(idx);
            z.push_back((1.0 / r) * x);
            vals.push_back(scale * (u[idx] - dot(p, x)));
        }
        const BestPlane<D> bp = best_plane_fit<D>(z, vals);
        p = p + std::pow(r, alpha) * bp.p;
    }
    return trace;
}

/// Largest admissible flatness radius given C^{1,alpha0} constants of the
/// limit equation: rho with C0 rho^{alpha0} <= 1/4, capped inside
/// (0, 2^{-gamma-1}).
inline double flatness_rho_bound(double c0, double alpha0, double gamma) {
    if (!(c0 > 0.0) || !(alpha0 > 0.0) || !(alpha0 < 1.0) || !(gamma >= 0.0))
        throw ConfigError("flatness_rho_bound: need C0 > 0, alpha0 in (0,1), gamma >= 0");
    const double from_c = std::pow(0.25 / c0, 1.0 / alpha0);
    const double cap = 0.999 * std::pow(2.0, -gamma - 1.0);
    return std::min(from_c, cap);
}

/// Parameters of the doubling-variables functional
///   u(x) - u(y) - L1 w(|x-y|) - L2 |x-x0|^2 - L2 |y-x0|^2
/// with w(s) = s - w0 s^{3/2} capped at its maximum s0 = (2/(3 w0))^2.
template <int D>
struct DoublingConfig {
    double r = 0.5;
    Vec<D> x0 = zero_vec<D>();
    double L1 = 1.0;
    double L2 = 64.0; // default (4/r)^2
    double omega0 = 2.0 / 3.0;
    double a0 = 1.0; // slope threshold of the instance; recorded, not used here

    static DoublingConfig with_default_l2(double r_, const Vec<D>& x0_, double L1_,
                                          double omega0_, double a0_ = 1.0) {
        DoublingConfig c;
        c.r = r_;
        c.x0 = x0_;
        c.L1 = L1_;
        c.L2 = (4.0 / r_) * (4.0 / r_);
        c.omega0 = omega0_;
        c.a0 = a0_;
        return c;
    }

    double s0() const { return std::pow(2.0 / (3.0 * omega0), 2.0); }

    double omega(double s) const {
        const double cap = s0();
        const double t = std::min(s, cap);
        return t - omega0 * t * std::sqrt(t);
    }

    void validate() const {
        if (!(r > 0.0) || !(r < 1.0)) throw ConfigError("doubling: r must be in (0,1)");
        if (!(L1 > 0.0) || !(L2 > 0.0)) throw ConfigError("doubling: L1, L2 must be > 0");
        if (!(omega0 > 0.0)) throw ConfigError("doubling: omega0 must be > 0");
        if (s0() < 1.0 - 1e-12)
            throw ConfigError("doubling: omega cap s0 = (2/(3 omega0))^2 must be >= 1");
        if (!(norm2sq(x0) <= 0.25 * r * r + 1e-12))
            throw ConfigError("doubling: x0 must lie in B_{r/2}");
    }
};

template <int D>
struct DoublingCertificate {
    double m = 0.0;
    bool certified = false; // m <= 0
    Vec<D> witness_x = zero_vec<D>();
    Vec<D> witness_y = zero_vec<D>();
    bool has_witness = false;
};

/// Exact maximum of the doubling functional over all node pairs in B_r(0).
/// M <= 0 certifies the Lipschitz bound with constant L1 near x0; otherwise
/// the maximizing pair is returned as a witness.
template <int D>
inline DoublingCertificate<D> doubling_certify(const ScalarField<D>& u,
                                               const DoublingConfig<D>& cfg) {
    cfg.validate();
    const Grid<D>& g = u.grid();
    const auto nodes = g.ball(zero_vec<D>(), cfg.r);
    if (nodes.size() < 2) throw DomainError("doubling_certify: ball holds fewer than 2 nodes");

    std::vector<Vec<D>> xs(nodes.size());
    std::vector<double> loc(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        xs[i] = g.coords(nodes[i]);
        loc[i] = cfg.L2 * norm2sq(xs[i] - cfg.x0);
    }

    DoublingCertificate<D> out;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double s = norm2(xs[i] - xs[j]);
            const double v = u[nodes[i]] - u[nodes[j]] - cfg.L1 * cfg.omega(s) - loc[i] - loc[j];
            if (v > best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    out.m = best;
    out.certified = best <= 0.0;
    if (!out.certified) {
        out.witness_x = xs[bi];
        out.witness_y = xs[bj];
        out.has_witness = true;
    }
    return out;
}

} // namespace degel
