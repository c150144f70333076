#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "degel/vec.hpp"

namespace degel {

/// Symmetric DxD matrix, upper triangle stored row-major.
/// Symmetry holds by construction; (i,j) and (j,i) alias one entry.
template <int D>
class SymMatrix {
    static_assert(D >= 1 && D <= 3, "closed-form eigenvalues cover d <= 3 only");

  public:
    static constexpr int kStored = D * (D + 1) / 2;

    SymMatrix() { a_.fill(0.0); }

    static SymMatrix zero() { return SymMatrix(); }

    static SymMatrix identity() {
        SymMatrix m;
        for (int i = 0; i < D; ++i) m(i, i) = 1.0;
        return m;
    }

    static SymMatrix diag(const Vec<D>& v) {
        SymMatrix m;
        for (int i = 0; i < D; ++i) m(i, i) = v[i];
        return m;
    }

    /// Rank-one a * (v v^T).
    static SymMatrix outer(double a, const Vec<D>& v) {
        SymMatrix m;
        for (int i = 0; i < D; ++i)
            for (int j = i; j < D; ++j) m(i, j) = a * v[i] * v[j];
        return m;
    }

    double& operator()(int i, int j) { return a_[index(i, j)]; }
    double operator()(int i, int j) const { return a_[index(i, j)]; }

    SymMatrix& operator+=(const SymMatrix& o) {
        for (int k = 0; k < kStored; ++k) a_[k] += o.a_[k];
        return *this;
    }
    SymMatrix& operator-=(const SymMatrix& o) {
        for (int k = 0; k < kStored; ++k) a_[k] -= o.a_[k];
        return *this;
    }
    SymMatrix& operator*=(double t) {
        for (int k = 0; k < kStored; ++k) a_[k] *= t;
        return *this;
    }

    friend SymMatrix operator+(SymMatrix x, const SymMatrix& y) { return x += y; }
    friend SymMatrix operator-(SymMatrix x, const SymMatrix& y) { return x -= y; }
    friend SymMatrix operator*(double t, SymMatrix x) { return x *= t; }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < D; ++i) s += (*this)(i, i);
        return s;
    }

    /// <M v, v>.
    double quad(const Vec<D>& v) const {
        double s = 0.0;
        for (int i = 0; i < D; ++i) {
            s += (*this)(i, i) * v[i] * v[i];
            for (int j = i + 1; j < D; ++j) s += 2.0 * (*this)(i, j) * v[i] * v[j];
        }
        return s;
    }

    Vec<D> apply(const Vec<D>& v) const {
        Vec<D> r = zero_vec<D>();
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (int k = 0; k < kStored; ++k) m = std::max(m, std::abs(a_[k]));
        return m;
    }

    /// Eigenvalues in ascending order, by closed form (quadratic for d=2,
    /// trigonometric Cardano for d=3).
    Vec<D> eigenvalues() const;

  private:
    static constexpr int index(int i, int j) {
        if (i > j) std::swap(i, j);
        // row-major upper triangle
        return i * D - i * (i - 1) / 2 + (j - i);
    }

    std::array<double, kStored> a_;
};

template <>
inline Vec<1> SymMatrix<1>::eigenvalues() const {
    return {a_[0]};
}

template <>
inline Vec<2> SymMatrix<2>::eigenvalues() const {
    const double a = (*this)(0, 0), b = (*this)(0, 1), c = (*this)(1, 1);
    const double mean = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return {mean - disc, mean + disc};
}

template <>
inline Vec<3> SymMatrix<3>::eigenvalues() const {
    // Trigonometric solution of the characteristic cubic (Smith's method),
    // then Newton on the characteristic polynomial in extended precision.
    // The trig form alone loses half the digits on (near-)repeated spectra.
    const SymMatrix<3>& A = *this;
    const double q = A.trace() / 3.0;
    SymMatrix<3> B = A;
    for (int i = 0; i < 3; ++i) B(i, i) -= q;
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p2 += B(i, j) * B(i, j);
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return {q, q, q};
    SymMatrix<3> C = (1.0 / p) * B;
    const double detC = C(0, 0) * (C(1, 1) * C(2, 2) - C(1, 2) * C(1, 2)) -
                        C(0, 1) * (C(0, 1) * C(2, 2) - C(1, 2) * C(0, 2)) +
                        C(0, 2) * (C(0, 1) * C(1, 2) - C(1, 1) * C(0, 2));
    const double r = std::clamp(detC / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    Vec<3> ev;
    ev[2] = q + 2.0 * p * std::cos(phi);
    ev[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    ev[1] = 3.0 * q - ev[0] - ev[2];

    // char poly lambda^3 - c2 lambda^2 + c1 lambda - c0
    const long double c2 = A.trace();
    const long double c1 =
        (long double)(A(0, 0)) * A(1, 1) - (long double)(A(0, 1)) * A(0, 1) +
        (long double)(A(0, 0)) * A(2, 2) - (long double)(A(0, 2)) * A(0, 2) +
        (long double)(A(1, 1)) * A(2, 2) - (long double)(A(1, 2)) * A(1, 2);
    const long double c0 =
        (long double)(A(0, 0)) * ((long double)(A(1, 1)) * A(2, 2) - (long double)(A(1, 2)) * A(1, 2)) -
        (long double)(A(0, 1)) * ((long double)(A(0, 1)) * A(2, 2) - (long double)(A(1, 2)) * A(0, 2)) +
        (long double)(A(0, 2)) * ((long double)(A(0, 1)) * A(1, 2) - (long double)(A(1, 1)) * A(0, 2));
    const long double guard = 1e-4L * (std::abs((long double)ev[2]) + p + 1.0L);
    for (int k = 0; k < 3; ++k) {
        long double x = ev[k];
        const long double x0 = x;
        for (int it = 0; it < 60; ++it) {
            const long double f = ((x - c2) * x + c1) * x - c0;
            const long double df = (3.0L * x - 2.0L * c2) * x + c1;
            if (df == 0.0L) break;
            const long double step = f / df;
            x -= step;
            if (std::abs(x - x0) > guard) { // runaway toward another root
                x = x0;
                break;
            }
            if (std::abs(step) < 1e-30L) break;
        }
        ev[k] = double(x);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Sum of positive eigenvalues.
template <int D>
inline double trace_plus(const SymMatrix<D>& m) {
    const Vec<D> ev = m.eigenvalues();
    double s = 0.0;
    for (int i = 0; i < D; ++i) s += std::max(ev[i], 0.0);
    return s;
}

/// Sum of negative eigenvalues.
template <int D>
inline double trace_minus(const SymMatrix<D>& m) {
    const Vec<D> ev = m.eigenvalues();
    double s = 0.0;
    for (int i = 0; i < D; ++i) s += std::min(ev[i], 0.0);
    return s;
}

/// Positive semidefinite up to an absolute eigenvalue tolerance.
template <int D>
inline bool is_psd(const SymMatrix<D>& m, double tol) {
    const Vec<D> ev = m.eigenvalues();
    for (int i = 0; i < D; ++i)
        if (ev[i] < -tol) return false;
    return true;
}

} // namespace degel
