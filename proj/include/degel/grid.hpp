#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "degel/errors.hpp"
#include "degel/vec.hpp"

namespace degel {

enum class NodeMask : std::uint8_t { Exterior = 0, Interior = 1, Band = 2 };

/// Uniform Cartesian grid on [-1,1]^D around the unit ball.
///
/// Nodes sit at x_i = -1 + i*h with h = 2/(n-1). A node is interior when
/// |x| < 1 - W*h, and belongs to the Dirichlet band when it is not interior
/// but lies within W*h of the unit sphere. Everything else is exterior and
/// never read. The band width equals the stencil radius W in grid steps, so
/// every interior node has its full radius-W stencil inside interior + band.
template <int D>
class Grid {
  public:
    Grid(int n, int stencil_radius) : n_(n), w_(stencil_radius) {
        if (w_ < 1) throw ConfigError("stencil radius must be >= 1");
        if (n_ < 2 * w_ + 3)
            throw ConfigError("grid resolution too small for stencil radius: need n >= 2W+3");
        h_ = 2.0 / double(n_ - 1);

        std::size_t total = 1;
        for (int a = 0; a < D; ++a) total *= std::size_t(n_);
        mask_.assign(total, NodeMask::Exterior);

        const double r_int = 1.0 - w_ * h_;
        const double r_band = 1.0 + w_ * h_;
        // exact comparisons are fine for n = 2^k + 1; the epsilon guards the rest
        const double eps = 1e-12;
        for (std::size_t idx = 0; idx < total; ++idx) {
            const double r = norm2<D>(coords(idx));
            if (r < r_int - eps) {
                mask_[idx] = NodeMask::Interior;
                interior_.push_back(idx);
            } else if (r <= r_band + eps) {
                mask_[idx] = NodeMask::Band;
                band_.push_back(idx);
            }
        }
    }

    int n() const { return n_; }
    int stencil_radius() const { return w_; }
    double h() const { return h_; }
    std::size_t num_nodes() const { return mask_.size(); }

    NodeMask mask(std::size_t idx) const { return mask_[idx]; }
    bool masked_in(std::size_t idx) const { return mask_[idx] != NodeMask::Exterior; }

    std::span<const std::size_t> interior() const { return interior_; }
    std::span<const std::size_t> band() const { return band_; }

    IVec<D> multi_index(std::size_t idx) const {
        IVec<D> mi;
        for (int a = D - 1; a >= 0; --a) {
            mi[a] = int(idx % std::size_t(n_));
            idx /= std::size_t(n_);
        }
        return mi;
    }

    std::size_t flat_index(const IVec<D>& mi) const {
        std::size_t idx = 0;
        for (int a = 0; a < D; ++a) idx = idx * std::size_t(n_) + std::size_t(mi[a]);
        return idx;
    }

    Vec<D> coords(std::size_t idx) const {
        const IVec<D> mi = multi_index(idx);
        Vec<D> x;
        for (int a = 0; a < D; ++a) x[a] = -1.0 + h_ * mi[a];
        return x;
    }

    /// Signed flat-index offset of a step h*e. Valid only when the move stays
    /// inside the index box, which mask construction guarantees for stencil
    /// moves from interior nodes.
    std::ptrdiff_t offset(const IVec<D>& e) const {
        std::ptrdiff_t o = 0;
        for (int a = 0; a < D; ++a) o = o * n_ + e[a];
        return o;
    }

    /// Masked-in nodes with |x - center| <= r (closed discrete ball).
    std::vector<std::size_t> ball(const Vec<D>& center, double r) const {
        std::vector<std::size_t> out;
        const double r2 = r * r * (1.0 + 1e-13) + 1e-14;
        for (std::size_t idx = 0; idx < mask_.size(); ++idx) {
            if (mask_[idx] == NodeMask::Exterior) continue;
            Vec<D> dx = coords(idx) - center;
            if (norm2sq<D>(dx) <= r2) out.push_back(idx);
        }
        return out;
    }

    bool same_layout(const Grid& o) const { return n_ == o.n_ && w_ == o.w_; }

  private:
    int n_;
    int w_;
    double h_;
    std::vector<NodeMask> mask_;
    std::vector<std::size_t> interior_;
    std::vector<std::size_t> band_;
};

/// Grid-sampled scalar function. Values at exterior nodes are never read.
template <int D>
class ScalarField {
  public:
    explicit ScalarField(std::shared_ptr<const Grid<D>> grid)
        : grid_(std::move(grid)), values_(grid_->num_nodes(), 0.0) {}

    template <typename Fn>
    static ScalarField sample(std::shared_ptr<const Grid<D>> grid, Fn&& fn) {
        ScalarField f(std::move(grid));
        for (std::size_t idx = 0; idx < f.values_.size(); ++idx)
            if (f.grid_->masked_in(idx)) f.values_[idx] = fn(f.grid_->coords(idx));
        return f;
    }

    const Grid<D>& grid() const { return *grid_; }
    std::shared_ptr<const Grid<D>> grid_ptr() const { return grid_; }

    double operator[](std::size_t idx) const { return values_[idx]; }
    double& operator[](std::size_t idx) { return values_[idx]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double max_abs(std::span<const std::size_t> nodes) const {
        double m = 0.0;
        for (std::size_t idx : nodes) m = std::max(m, std::abs(values_[idx]));
        return m;
    }

    /// Max over all masked-in nodes.
    double max_abs() const {
        double m = 0.0;
        for (std::size_t idx = 0; idx < values_.size(); ++idx)
            if (grid_->masked_in(idx)) m = std::max(m, std::abs(values_[idx]));
        return m;
    }

    bool all_finite() const {
        for (std::size_t idx = 0; idx < values_.size(); ++idx)
            if (grid_->masked_in(idx) && !std::isfinite(values_[idx])) return false;
        return true;
    }

  private:
    std::shared_ptr<const Grid<D>> grid_;
    std::vector<double> values_;
};

/// max - min of the field over a nonempty node set.
template <int D>
inline double osc(const ScalarField<D>& u, std::span<const std::size_t> nodes) {
    if (nodes.empty()) throw DomainError("osc: empty point set");
    double lo = u[nodes[0]], hi = u[nodes[0]];
    for (std::size_t idx : nodes) {
        lo = std::min(lo, u[idx]);
        hi = std::max(hi, u[idx]);
    }
    return hi - lo;
}

template <int D>
inline double osc(const ScalarField<D>& u, const std::vector<std::size_t>& nodes) {
    return osc(u, std::span<const std::size_t>(nodes));
}

} // namespace degel
