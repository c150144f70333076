#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "degel/errors.hpp"
#include "degel/sym.hpp"

namespace degel {

/// Absolute tolerance for PSD checks and slack assertions on eigenvalue paths.
inline constexpr double kTolEig = 1e-10;

struct EllipticityConstants {
    double lambda = 1.0;
    double Lambda = 1.0;

    EllipticityConstants() = default;
    EllipticityConstants(double lam, double Lam) : lambda(lam), Lambda(Lam) {
        if (!(lambda > 0.0) || !(Lambda >= lambda))
            throw ConfigError("ellipticity constants require 0 < lambda <= Lambda");
    }
};

enum class OperatorKind { NegLaplacian, PucciMinus, PucciPlus };

inline std::string to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::NegLaplacian: return "neg-laplacian";
        case OperatorKind::PucciMinus: return "pucci-minus";
        case OperatorKind::PucciPlus: return "pucci-plus";
    }
    return "?";
}

inline OperatorKind operator_kind_from_string(const std::string& s) {
    if (s == "neg-laplacian") return OperatorKind::NegLaplacian;
    if (s == "pucci-minus") return OperatorKind::PucciMinus;
    if (s == "pucci-plus") return OperatorKind::PucciPlus;
    throw ConfigError("unknown operator kind: " + s);
}

/// One of the built-in uniformly elliptic nonlinearities, decreasing in the
/// matrix argument: F(X) = -tr X, or a Pucci extremal operator.
/// The Laplacian kind pins lambda = Lambda = 1.
struct EllipticOperator {
    OperatorKind kind = OperatorKind::NegLaplacian;
    EllipticityConstants constants;

    EllipticOperator() = default;
    EllipticOperator(OperatorKind k, EllipticityConstants c) : kind(k), constants(c) {
        if (kind == OperatorKind::NegLaplacian) constants = EllipticityConstants(1.0, 1.0);
    }

    static EllipticOperator neg_laplacian() {
        return EllipticOperator(OperatorKind::NegLaplacian, EllipticityConstants(1.0, 1.0));
    }
    static EllipticOperator pucci_minus(double lambda, double Lambda) {
        return EllipticOperator(OperatorKind::PucciMinus, EllipticityConstants(lambda, Lambda));
    }
    static EllipticOperator pucci_plus(double lambda, double Lambda) {
        return EllipticOperator(OperatorKind::PucciPlus, EllipticityConstants(lambda, Lambda));
    }
};

/// P^-(X) = -Lambda tr X^+ - lambda tr X^-.
template <int D>
inline double pucci_minus_of(const SymMatrix<D>& x, const EllipticityConstants& c) {
    return -c.Lambda * trace_plus(x) - c.lambda * trace_minus(x);
}

/// P^+(X) = -lambda tr X^+ - Lambda tr X^-  (equivalently -P^-(-X)).
template <int D>
inline double pucci_plus_of(const SymMatrix<D>& x, const EllipticityConstants& c) {
    return -c.lambda * trace_plus(x) - c.Lambda * trace_minus(x);
}

template <int D>
inline double eval_F(const EllipticOperator& op, const SymMatrix<D>& x) {
    switch (op.kind) {
        case OperatorKind::NegLaplacian: return -x.trace();
        case OperatorKind::PucciMinus: return pucci_minus_of(x, op.constants);
        case OperatorKind::PucciPlus: return pucci_plus_of(x, op.constants);
    }
    return 0.0;
}

/// Slacks of the uniform-ellipticity inequality
///   lambda tr Y <= F(X) - F(X+Y) <= Lambda tr Y,   Y >= 0.
/// Returns (lower slack, upper slack); both >= -kTolEig for the built-ins.
template <int D>
inline std::pair<double, double> ellipticity_gap(const EllipticOperator& op,
                                                 const SymMatrix<D>& x,
                                                 const SymMatrix<D>& y) {
    if (!is_psd(y, kTolEig)) throw DomainError("ellipticity_gap: Y must be positive semidefinite");
    const double drop = eval_F(op, x) - eval_F(op, x + y);
    const double try_ = y.trace();
    return {drop - op.constants.lambda * try_, op.constants.Lambda * try_ - drop};
}

/// Slacks of P^-(Y) <= F(X+Y) - F(X) <= P^+(Y), any symmetric X, Y.
template <int D>
inline std::pair<double, double> pucci_sandwich(const EllipticOperator& op,
                                                const SymMatrix<D>& x,
                                                const SymMatrix<D>& y) {
    const double diff = eval_F(op, x + y) - eval_F(op, x);
    return {diff - pucci_minus_of(y, op.constants), pucci_plus_of(y, op.constants) - diff};
}

/// The rescaled evaluator X -> a^{-1} F(aX), a > 0. For the built-in kinds
/// positive 1-homogeneity makes it pointwise identical to F.
template <int D>
inline std::function<double(const SymMatrix<D>&)> rescaled_op(const EllipticOperator& op,
                                                              double a) {
    if (!(a > 0.0)) throw DomainError("rescaled_op: scale must be positive");
    return [op, a](const SymMatrix<D>& x) { return eval_F(op, a * x) / a; };
}

} // namespace degel
