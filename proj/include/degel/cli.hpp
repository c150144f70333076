#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "degel/config.hpp"
#include "degel/errors.hpp"
#include "degel/io.hpp"
#include "degel/presets.hpp"
#include "degel/problem.hpp"
#include "degel/proptest.hpp"
#include "degel/regularity.hpp"
#include "degel/solver.hpp"
#include "degel/viscosity.hpp"

namespace degel {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitInsufficientData = 4,
};

namespace cli {

template <int D>
inline ProblemSpec<D> problem_from_config(const RunConfig& c) {
    ProblemSpec<D> spec;
    spec.gamma = c.gamma;
    for (int a = 0; a < D; ++a) spec.p[a] = c.p[std::size_t(a)];
    spec.op = EllipticOperator(operator_kind_from_string(c.op),
                               EllipticityConstants(c.lambda, c.Lambda));
    const auto base = boundary_preset<D>(c.boundary);
    const double scale = c.boundary_scale;
    spec.boundary = [base, scale](const Vec<D>& x) { return scale * base(x); };
    spec.f = rhs_preset<D>(c.f, c.gamma);
    spec.n = c.n;
    spec.stencil_radius = c.stencil_w;
    spec.validate();
    return spec;
}

template <int D>
inline SolveOptions solve_options(const RunConfig& c) {
    SolveOptions opt;
    opt.tol = c.tol;
    opt.max_iters = c.max_iters;
    return opt;
}

inline nlohmann::json report_json(const SolveReport& rep) {
    nlohmann::json j;
    j["iterations"] = rep.iterations;
    j["final_residual"] = rep.final_residual;
    j["converged"] = rep.converged;
    j["dt"] = {{"min", rep.dt_min}, {"max", rep.dt_max}, {"final", rep.dt_final}};
    // wall time deliberately not serialized: output files are byte-reproducible
    return j;
}

/// The field a measurement command operates on: a stored solution, an
/// analytic preset sampled on the grid, or an inline solve.
template <int D>
inline ScalarField<D> acquire_field(const RunConfig& c, SolveReport* rep_out = nullptr) {
    auto grid = std::make_shared<const Grid<D>>(c.n, c.stencil_w);
    if (!c.input.empty()) return read_solution_csv<D>(c.input, grid);
    if (!c.analytic.empty()) {
        const auto fn = boundary_preset<D>(c.analytic);
        const double scale = c.boundary_scale;
        return ScalarField<D>::sample(grid, [&](const Vec<D>& x) { return scale * fn(x); });
    }
    auto [u, rep] = solve(problem_from_config<D>(c), solve_options<D>(c));
    if (rep_out) *rep_out = rep;
    return std::move(u);
}

template <int D>
inline int cmd_solve(const RunConfig& c) {
    const ProblemSpec<D> spec = problem_from_config<D>(c);
    auto [u, rep] = solve(spec, solve_options<D>(c));
    write_file_atomic(c.out_prefix + "_solution.csv", solution_csv(u));
    nlohmann::json j = report_json(rep);
    j["config"] = c.resolved_json();
    write_json_atomic(c.out_prefix + "_report.json", j);
    std::printf("solve: n=%d iterations=%lld final_residual=%s converged=%s (%.2fs)\n", c.n,
                rep.iterations, float17(rep.final_residual).c_str(),
                rep.converged ? "true" : "false", rep.wall_seconds);
    return kExitOk;
}

template <int D>
inline std::string profile_csv(const OscillationProfile<D>& prof,
                               const std::vector<std::string>& bound_ok) {
    std::vector<std::string> header = {"k", "r", "phi"};
    const char* pn[3] = {"p_x", "p_y", "p_z"};
    for (int a = 0; a < D; ++a) header.push_back(pn[a]);
    header.push_back("bound_ok");
    CsvWriter csv(header);
    for (std::size_t i = 0; i < prof.entries.size(); ++i) {
        const auto& e = prof.entries[i];
        std::vector<std::string> cells = {std::to_string(e.k), float17(e.r), float17(e.phi)};
        for (int a = 0; a < D; ++a) cells.push_back(float17(e.p[a]));
        cells.push_back(i < bound_ok.size() ? bound_ok[i] : "");
        csv.row(cells);
    }
    return csv.str();
}

template <int D>
inline int cmd_regularity(const RunConfig& c) {
    // gamma sweep over the closed-form family: one fitted exponent per gamma
    if (!c.sweep_gamma.empty()) {
        CsvWriter csv({"gamma", "alpha_expected", "alpha_fit", "stderr"});
        nlohmann::json rows = nlohmann::json::array();
        auto grid = std::make_shared<const Grid<D>>(c.n, c.stencil_w);
        for (double gamma : c.sweep_gamma) {
            const double alpha_exp = 1.0 / (1.0 + gamma);
            const auto u = ScalarField<D>::sample(grid, [&](const Vec<D>& x) {
                return std::pow(norm2sq(x), 0.5 * (1.0 + alpha_exp));
            });
            const auto prof = oscillation_profile(u, zero_vec<D>(), c.rho, c.levels);
            const ExponentFit fit = fit_exponent(prof);
            csv.row({float17(gamma), float17(alpha_exp), float17(fit.alpha), float17(fit.stderr_)});
            rows.push_back({{"gamma", gamma},
                            {"alpha_expected", alpha_exp},
                            {"alpha_fit", fit.alpha},
                            {"stderr", fit.stderr_}});
        }
        write_file_atomic(c.out_prefix + "_sweep.csv", csv.str());
        nlohmann::json j;
        j["sweep"] = rows;
        j["config"] = c.resolved_json();
        write_json_atomic(c.out_prefix + "_regularity.json", j);
        std::printf("regularity: wrote gamma sweep with %zu rows\n", c.sweep_gamma.size());
        return kExitOk;
    }

    SolveReport rep;
    const ScalarField<D> u = acquire_field<D>(c, &rep);
    Vec<D> x0;
    for (int a = 0; a < D; ++a) x0[a] = c.center[std::size_t(a)];
    const auto prof = oscillation_profile(u, x0, c.rho, c.levels);
    write_file_atomic(c.out_prefix + "_profile.csv",
                      profile_csv(prof, std::vector<std::string>(prof.entries.size(), "")));

    nlohmann::json j;
    j["config"] = c.resolved_json();
    j["truncated"] = prof.truncated;

    // seminorms over the discrete B_{1/2}
    const auto half_ball = u.grid().ball(zero_vec<D>(), 0.5);
    nlohmann::json semis = nlohmann::json::object();
    for (double beta : c.betas)
        semis["beta_" + float17(beta)] = holder_seminorm(u, half_ball, beta);
    j["holder_seminorms"] = semis;
    j["lipschitz_seminorm"] = holder_seminorm(u, half_ball, 1.0);

    bool flat = true;
    double phi_max = 0.0;
    for (const auto& e : prof.entries) phi_max = std::max(phi_max, e.phi);
    flat = phi_max <= 1e-12;
    j["flat"] = flat;
    if (flat) {
        j["alpha"] = nullptr;
        write_json_atomic(c.out_prefix + "_regularity.json", j);
        std::printf("regularity: field is flat to plane accuracy; no exponent to fit\n");
        return kExitOk;
    }
    try {
        const ExponentFit fit = fit_exponent(prof);
        j["alpha"] = fit.alpha;
        j["alpha_stderr"] = fit.stderr_;
        j["fit_residual"] = fit.fit_residual;
        j["used_scales"] = fit.used_scales;
        j["excluded_scales"] = fit.excluded_scales;
        double c1a = 0.0;
        for (const auto& e : prof.entries)
            c1a = std::max(c1a, e.phi / std::pow(e.r, 1.0 + fit.alpha));
        j["c1alpha_seminorm"] = c1a;
    } catch (const InsufficientData& err) {
        j["alpha"] = nullptr;
        j["error"] = err.what();
        write_json_atomic(c.out_prefix + "_regularity.json", j);
        std::printf("regularity: %s\n", err.what());
        return kExitInsufficientData;
    }
    write_json_atomic(c.out_prefix + "_regularity.json", j);
    std::printf("regularity: alpha=%s stderr=%s over %d scales\n",
                float17(j["alpha"].get<double>()).c_str(),
                float17(j["alpha_stderr"].get<double>()).c_str(), j["used_scales"].get<int>());
    return kExitOk;
}

template <int D>
inline int cmd_flatness(const RunConfig& c) {
    if (!(c.alpha < 1.0 / (1.0 + c.gamma)))
        throw ConfigError("flatness: requires alpha < 1/(1+gamma) = " +
                          float17(1.0 / (1.0 + c.gamma)));
    SolveReport rep;
    ScalarField<D> u = acquire_field<D>(c, &rep);
    double kappa = 1.0;
    if (c.normalize) {
        // bring the instance into the osc <= 1, ||f|| <= eps0 frame first
        const ScalarField<D> f = c.analytic.empty()
                                     ? problem_from_config<D>(c).sample_f(u.grid_ptr())
                                     : ScalarField<D>(u.grid_ptr());
        const auto norm = kappa_normalize(u, f, c.eps0, c.gamma);
        if (!norm.trivial) {
            kappa = norm.kappa;
            u = norm.u;
        }
    }
    const auto trace = flatness_iterate(u, c.gamma, c.rho, c.alpha, c.levels);

    std::vector<std::string> header = {"k", "r", "phi"};
    const char* pn[3] = {"p_x", "p_y", "p_z"};
    for (int a = 0; a < D; ++a) header.push_back(pn[a]);
    header.push_back("bound_ok");
    CsvWriter csv(header);
    bool all_pass = !trace.empty();
    for (const auto& row : trace) {
        std::vector<std::string> cells = {std::to_string(row.k), float17(row.r),
                                          float17(row.osc_val)};
        for (int a = 0; a < D; ++a) cells.push_back(float17(row.p[a]));
        cells.push_back(row.bound_ok ? "1" : "0");
        csv.row(cells);
        all_pass = all_pass && row.bound_ok;
    }
    write_file_atomic(c.out_prefix + "_flatness.csv", csv.str());
    nlohmann::json j;
    j["all_pass"] = all_pass;
    j["levels_recorded"] = trace.size();
    j["kappa"] = kappa;
    j["config"] = c.resolved_json();
    write_json_atomic(c.out_prefix + "_flatness.json", j);
    std::printf("flatness: %zu levels, all_pass=%s\n", trace.size(), all_pass ? "true" : "false");
    return kExitOk;
}

template <int D>
inline int cmd_doubling(const RunConfig& c) {
    SolveReport rep;
    const ScalarField<D> u = acquire_field<D>(c, &rep);
    DoublingConfig<D> cfg;
    cfg.r = c.dbl_r;
    for (int a = 0; a < D; ++a) cfg.x0[a] = c.dbl_x0[std::size_t(a)];
    cfg.L1 = c.dbl_L1;
    cfg.L2 = c.dbl_L2;
    cfg.omega0 = c.dbl_omega0;
    cfg.a0 = c.dbl_a0;
    const auto cert = doubling_certify(u, cfg);
    nlohmann::json j;
    j["M"] = cert.m;
    j["certified"] = cert.certified;
    if (cert.has_witness) {
        j["witness"] = {{"x", cert.witness_x}, {"y", cert.witness_y}};
    } else {
        j["witness"] = nullptr;
    }
    j["config"] = c.resolved_json();
    write_json_atomic(c.out_prefix + "_doubling.json", j);
    std::printf("doubling: M=%s certified=%s\n", float17(cert.m).c_str(),
                cert.certified ? "true" : "false");
    return kExitOk;
}

template <int D>
inline int cmd_equivalence(const RunConfig& c) {
    const ProblemSpec<D> spec = problem_from_config<D>(c);
    const auto eq = lemma_equivalence(spec, solve_options<D>(c));
    write_file_atomic(c.out_prefix + "_degenerate.csv", solution_csv(eq.u_degenerate));
    write_file_atomic(c.out_prefix + "_limit.csv", solution_csv(eq.u_limit));

    // quadratic touching audit of the degenerate solution
    std::vector<QuadraticTest<D>> tests;
    for (const auto& a : default_test_hessians<D>())
        for (const auto& b : observed_slopes(eq.u_degenerate, 8)) tests.push_back({a, b});
    const auto touching =
        touching_check(eq.u_degenerate, spec.gamma, spec.p, spec.op, tests, spec.f);
    write_file_atomic(c.out_prefix + "_touching.csv", touching_csv(touching));

    nlohmann::json j;
    j["max_gap"] = eq.max_gap;
    j["degenerate"] = report_json(eq.report_degenerate);
    j["limit"] = report_json(eq.report_limit);
    j["touching_events"] = touching.events.size();
    j["touching_violations"] = touching.violations;
    j["touching_tol"] = touching.tol;
    j["config"] = c.resolved_json();
    write_json_atomic(c.out_prefix + "_equivalence.json", j);
    std::printf("equivalence: max_gap=%s (degenerate %s, limit %s), %d touching violations\n",
                float17(eq.max_gap).c_str(),
                eq.report_degenerate.converged ? "converged" : "NOT converged",
                eq.report_limit.converged ? "converged" : "NOT converged", touching.violations);
    return kExitOk;
}

inline int cmd_proptest(const RunConfig& c) {
    const auto suites = run_operator_property_suites(c.seed, c.samples);
    nlohmann::json rows = nlohmann::json::array();
    bool all = true;
    for (const auto& s : suites) {
        std::printf("%-40s samples=%lld max_violation=%s %s\n", s.name.c_str(), s.samples,
                    float17(s.max_violation).c_str(), s.pass ? "PASS" : "FAIL");
        rows.push_back({{"name", s.name},
                        {"samples", s.samples},
                        {"max_violation", s.max_violation},
                        {"tolerance", s.tolerance},
                        {"pass", s.pass}});
        all = all && s.pass;
    }
    nlohmann::json j;
    j["suites"] = rows;
    j["all_pass"] = all;
    j["config"] = c.resolved_json();
    write_json_atomic(c.out_prefix + "_proptest.json", j);
    return all ? kExitOk : kExitNumerical;
}

} // namespace cli
} // namespace degel
