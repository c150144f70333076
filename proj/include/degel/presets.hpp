#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "degel/errors.hpp"
#include "degel/problem.hpp"
#include "degel/vec.hpp"

namespace degel {

/// Named boundary-data presets (v1).
///
///   linear-x1        x_1
///   radial-3-2       |x|^{3/2}
///   saddle           x_1^2 - x_2^2         (x_1^2 for d=1)
///   harmonic-x1x2    x_1 x_2               (0 for d=1)
///   radial-power:a   |x|^{1+a}, a > 0 parsed from the name
///   zero             0
///
/// A separate multiplicative scale knob is applied by the caller.
template <int D>
inline std::function<double(const Vec<D>&)> boundary_preset(const std::string& name) {
    if (name == "linear-x1") return [](const Vec<D>& x) { return x[0]; };
    if (name == "radial-3-2")
        return [](const Vec<D>& x) { return std::pow(norm2sq<D>(x), 0.75); };
    if (name == "saddle")
        return [](const Vec<D>& x) {
            const double y = D >= 2 ? x[1] : 0.0;
            return x[0] * x[0] - y * y;
        };
    if (name == "harmonic-x1x2")
        return [](const Vec<D>& x) { return D >= 2 ? x[0] * x[1] : 0.0; };
    if (name == "zero") return [](const Vec<D>&) { return 0.0; };
    constexpr const char* kRadialPower = "radial-power:";
    if (name.rfind(kRadialPower, 0) == 0) {
        double a = 0.0;
        try {
            a = std::stod(name.substr(std::string(kRadialPower).size()));
        } catch (const std::exception&) {
            throw ConfigError("bad radial-power exponent in preset name: " + name);
        }
        if (!(a > 0.0)) throw ConfigError("radial-power exponent must be > 0");
        return [a](const Vec<D>& x) { return std::pow(norm2sq<D>(x), 0.5 * (1.0 + a)); };
    }
    throw ConfigError("unknown boundary preset: " + name);
}

/// Named right-hand-side presets (v1).
///
///   zero           0
///   const:c        the constant c
///   example-rhs    the constant C(gamma, d) making u = |x|^{1+alpha},
///                  alpha = 1/(1+gamma), an exact solution of
///                  |∇u|^gamma Δu = C
template <int D>
inline std::function<double(const Vec<D>&)> rhs_preset(const std::string& name, double gamma) {
    if (name == "zero") return [](const Vec<D>&) { return 0.0; };
    if (name == "example-rhs") {
        const double c = radial_power_rhs_constant(gamma, D);
        return [c](const Vec<D>&) { return c; };
    }
    constexpr const char* kConst = "const:";
    if (name.rfind(kConst, 0) == 0) {
        double c = 0.0;
        try {
            c = std::stod(name.substr(std::string(kConst).size()));
        } catch (const std::exception&) {
            throw ConfigError("bad constant in rhs preset name: " + name);
        }
        return [c](const Vec<D>&) { return c; };
    }
    throw ConfigError("unknown rhs preset: " + name);
}

} // namespace degel
