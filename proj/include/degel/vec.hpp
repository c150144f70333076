#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace degel {

template <int D>
using Vec = std::array<double, std::size_t(D)>;

template <int D>
using IVec = std::array<int, std::size_t(D)>;

template <std::size_t N>
inline double dot(const std::array<double, N>& a, const std::array<double, N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
inline double norm2sq(const std::array<double, N>& a) {
    return dot(a, a);
}

template <std::size_t N>
inline double norm2(const std::array<double, N>& a) {
    return std::sqrt(norm2sq(a));
}

template <std::size_t N>
inline std::array<double, N> operator+(std::array<double, N> a, const std::array<double, N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
    return a;
}

template <std::size_t N>
inline std::array<double, N> operator-(std::array<double, N> a, const std::array<double, N>& b) {
    for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
    return a;
}

template <std::size_t N>
inline std::array<double, N> operator*(double t, std::array<double, N> a) {
    for (std::size_t i = 0; i < N; ++i) a[i] *= t;
    return a;
}

template <std::size_t N>
inline double norm2sq(const std::array<int, N>& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += double(e[i]) * double(e[i]);
    return s;
}

template <int D>
inline Vec<D> zero_vec() {
    Vec<D> v{};
    v.fill(0.0);
    return v;
}

} // namespace degel
