#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "degel/errors.hpp"

namespace degel {

/// Flat run configuration shared by all CLI commands. Every field has a
/// default; unknown JSON keys are rejected.
struct RunConfig {
    // problem
    int dim = 2;
    double gamma = 0.0;
    std::string op = "neg-laplacian";
    double lambda = 1.0;
    double Lambda = 1.0;
    std::vector<double> p;        // padded with zeros to dim
    std::string boundary = "zero"; // preset name
    double boundary_scale = 1.0;
    std::string f = "zero"; // preset name: zero | const:<c> | example-rhs
    int n = 65;
    int stencil_w = 2;

    // solver
    double tol = -1.0; // < 0: 1e-8 * max(1, ||f||_inf)
    long long max_iters = 1000000;

    // regularity / flatness
    double rho = 0.5;
    int levels = 4;
    double alpha = 0.4;
    std::vector<double> center; // padded with zeros to dim
    double eps0 = 0.1;
    std::vector<double> betas = {0.5, 1.0};
    std::string analytic; // analytic field preset; empty = solve the problem
    std::string input;    // solution CSV to analyze; empty = solve or analytic
    std::vector<double> sweep_gamma;
    bool normalize = false; // kappa-normalize the field before flatness traces

    // doubling
    double dbl_r = 0.5;
    std::vector<double> dbl_x0; // padded with zeros to dim
    double dbl_L1 = 1.0;
    double dbl_L2 = -1.0; // < 0: (4/r)^2
    double dbl_omega0 = 2.0 / 3.0;
    double dbl_a0 = 1.0;

    // output / reproducibility
    std::string out_prefix = "degel_out";
    std::uint64_t seed = 12345;
    long long samples = 1000; // randomized property suites

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json resolved_json() const;

    void finalize() {
        if (dim < 1 || dim > 3) throw ConfigError("dim must be 1, 2 or 3");
        p.resize(std::size_t(dim), 0.0);
        center.resize(std::size_t(dim), 0.0);
        dbl_x0.resize(std::size_t(dim), 0.0);
        if (dbl_L2 < 0.0) dbl_L2 = (4.0 / dbl_r) * (4.0 / dbl_r);
    }
};

inline RunConfig RunConfig::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "dim",      "gamma",      "operator",   "lambda",     "Lambda",     "p",
        "boundary", "boundary_scale", "f",      "n",          "stencil_w",  "tol",
        "max_iters", "rho",       "levels",     "alpha",      "center",     "eps0",
        "betas",    "analytic",   "input",      "sweep_gamma", "normalize",  "doubling_r", "doubling_x0",
        "doubling_L1", "doubling_L2", "doubling_omega0", "doubling_a0", "out_prefix",
        "seed",     "samples"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config key: " + key);

    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).template get<std::decay_t<decltype(field)>>();
    };
    get("dim", c.dim);
    get("gamma", c.gamma);
    get("operator", c.op);
    get("lambda", c.lambda);
    get("Lambda", c.Lambda);
    get("p", c.p);
    get("boundary", c.boundary);
    get("boundary_scale", c.boundary_scale);
    get("f", c.f);
    get("n", c.n);
    get("stencil_w", c.stencil_w);
    get("tol", c.tol);
    get("max_iters", c.max_iters);
    get("rho", c.rho);
    get("levels", c.levels);
    get("alpha", c.alpha);
    get("center", c.center);
    get("eps0", c.eps0);
    get("betas", c.betas);
    get("analytic", c.analytic);
    get("input", c.input);
    get("sweep_gamma", c.sweep_gamma);
    get("normalize", c.normalize);
    get("doubling_r", c.dbl_r);
    get("doubling_x0", c.dbl_x0);
    get("doubling_L1", c.dbl_L1);
    get("doubling_L2", c.dbl_L2);
    get("doubling_omega0", c.dbl_omega0);
    get("doubling_a0", c.dbl_a0);
    get("out_prefix", c.out_prefix);
    get("seed", c.seed);
    get("samples", c.samples);
    c.finalize();
    return c;
}

inline nlohmann::json RunConfig::resolved_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["gamma"] = gamma;
    j["operator"] = op;
    j["lambda"] = lambda;
    j["Lambda"] = Lambda;
    j["p"] = p;
    j["boundary"] = boundary;
    j["boundary_scale"] = boundary_scale;
    j["f"] = f;
    j["n"] = n;
    j["stencil_w"] = stencil_w;
    j["tol"] = tol;
    j["max_iters"] = max_iters;
    j["rho"] = rho;
    j["levels"] = levels;
    j["alpha"] = alpha;
    j["center"] = center;
    j["eps0"] = eps0;
    j["betas"] = betas;
    j["analytic"] = analytic;
    j["input"] = input;
    j["sweep_gamma"] = sweep_gamma;
    j["normalize"] = normalize;
    j["doubling_r"] = dbl_r;
    j["doubling_x0"] = dbl_x0;
    j["doubling_L1"] = dbl_L1;
    j["doubling_L2"] = dbl_L2;
    j["doubling_omega0"] = dbl_omega0;
    j["doubling_a0"] = dbl_a0;
    j["out_prefix"] = out_prefix;
    j["seed"] = seed;
    j["samples"] = samples;
    return j;
}

} // namespace degel
