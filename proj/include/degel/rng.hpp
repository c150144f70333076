#pragma once

#include <cstdint>
#include <random>

namespace degel {

/// Deterministic uniforms straight from the mt19937_64 bit stream; avoids
/// std::uniform_real_distribution so the byte stream of emitted results does
/// not depend on the standard library build.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return double(gen_() >> 11) * 0x1.0p-53; } // [0, 1)

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::uint64_t bits() { return gen_(); }

    std::size_t index(std::size_t n) { return std::size_t(gen_() % n); }

  private:
    std::mt19937_64 gen_;
};

} // namespace degel
