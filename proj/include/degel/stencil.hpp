#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "degel/errors.hpp"
#include "degel/vec.hpp"

namespace degel {

/// Pairwise non-parallel integer stencil directions of Chebyshev radius <= W,
/// one representative per line (primitive, lexicographically positive).
/// Always contains the D axis directions. For D=2, W=2 this is the 8-direction
/// set {(1,0),(0,1),(1,1),(1,-1),(2,1),(1,2),(2,-1),(1,-2)}.
///
/// Frames group the directions into exactly-orthogonal D-subsets; they are the
/// diffusion bases the extremal operators extremize over.
template <int D>
class DirectionSet {
  public:
    static constexpr std::size_t kMaxDirections = 64;

    explicit DirectionSet(int radius) : w_(radius) {
        if (w_ < 1) throw ConfigError("stencil radius must be >= 1");
        enumerate_directions();
        if (dirs_.size() > kMaxDirections)
            throw ConfigError("stencil radius too large for this dimension");
        enumerate_frames();
    }

    static DirectionSet axes_only() {
        DirectionSet s(internal_axes_tag{});
        return s;
    }

    int radius() const { return w_; }
    const std::vector<IVec<D>>& directions() const { return dirs_; }
    std::size_t size() const { return dirs_.size(); }

    /// Indices into directions(); each frame has D mutually orthogonal members.
    const std::vector<std::array<int, D>>& frames() const { return frames_; }

    /// Index of the a-th axis direction.
    int axis(int a) const { return axis_index_[a]; }

  private:
    struct internal_axes_tag {};
    explicit DirectionSet(internal_axes_tag) : w_(1) {
        for (int a = 0; a < D; ++a) {
            IVec<D> e{};
            e.fill(0);
            e[a] = 1;
            axis_index_[a] = int(dirs_.size());
            dirs_.push_back(e);
        }
        std::array<int, D> f;
        for (int a = 0; a < D; ++a) f[a] = a;
        frames_.push_back(f);
    }

    static int gcd_all(const IVec<D>& e) {
        int g = 0;
        for (int a = 0; a < D; ++a) g = std::gcd(g, std::abs(e[a]));
        return g;
    }

    static bool lex_positive(const IVec<D>& e) {
        for (int a = 0; a < D; ++a) {
            if (e[a] > 0) return true;
            if (e[a] < 0) return false;
        }
        return false;
    }

    void enumerate_directions() {
        // walk the integer box [-W, W]^D
        IVec<D> e{};
        e.fill(-w_);
        while (true) {
            if (gcd_all(e) == 1 && lex_positive(e)) dirs_.push_back(e);
            int a = D - 1;
            while (a >= 0 && e[a] == w_) e[a--] = -w_;
            if (a < 0) break;
            ++e[a];
        }
        // axes first, then by length then lex; purely cosmetic but fixes order
        std::sort(dirs_.begin(), dirs_.end(), [](const IVec<D>& a, const IVec<D>& b) {
            const double la = norm2sq<D>(a), lb = norm2sq<D>(b);
            if (la != lb) return la < lb;
            return a < b;
        });
        for (int a = 0; a < D; ++a) {
            IVec<D> ax{};
            ax.fill(0);
            ax[a] = 1;
            auto it = std::find(dirs_.begin(), dirs_.end(), ax);
            axis_index_[a] = int(it - dirs_.begin());
        }
    }

    void enumerate_frames() {
        const int m = int(dirs_.size());
        std::array<int, D> pick{};
        auto ortho = [&](int i, int j) {
            long long s = 0;
            for (int a = 0; a < D; ++a) s += (long long)dirs_[i][a] * dirs_[j][a];
            return s == 0;
        };
        // depth-first over increasing index tuples
        std::vector<int> stack;
        stack.push_back(0);
        while (!stack.empty()) {
            int& cur = stack.back();
            if (cur >= m) {
                stack.pop_back();
                if (!stack.empty()) ++stack.back();
                continue;
            }
            bool ok = true;
            for (std::size_t k = 0; k + 1 < stack.size(); ++k)
                if (!ortho(stack[k], cur)) { ok = false; break; }
            if (!ok) {
                ++cur;
                continue;
            }
            if (int(stack.size()) == D) {
                for (int k = 0; k < D; ++k) pick[k] = stack[k];
                frames_.push_back(pick);
                ++cur;
            } else {
                stack.push_back(cur + 1);
            }
        }
        if (frames_.empty()) throw ConfigError("direction set admits no orthogonal frame");
    }

    int w_;
    std::vector<IVec<D>> dirs_;
    std::vector<std::array<int, D>> frames_;
    std::array<int, D> axis_index_{};
};

} // namespace degel
