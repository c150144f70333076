// Command-line front end: solve the degenerate problem, measure regularity,
// run flatness / doubling / equivalence experiments, or the randomized
// operator property suites.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 insufficient data.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "degel/cli.hpp"

namespace {

degel::RunConfig load_config(const std::string& config_path) {
    if (config_path.empty()) return degel::RunConfig{};
    std::ifstream in(config_path);
    if (!in) throw degel::ConfigError("cannot open config file: " + config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw degel::ConfigError(std::string("bad config JSON: ") + e.what());
    }
    return degel::RunConfig::from_json(j);
}

std::vector<double> parse_vector(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        try {
            out.push_back(std::stod(s.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw degel::ConfigError("bad vector component in: " + s);
        }
        pos = comma + 1;
    }
    return out;
}

// comma-separated vector flags land here, applied after parse
struct VectorFlags {
    std::string p, center, x0, betas, sweep_gamma;

    void apply(degel::RunConfig& c) const {
        if (!p.empty()) c.p = parse_vector(p);
        if (!center.empty()) c.center = parse_vector(center);
        if (!x0.empty()) c.dbl_x0 = parse_vector(x0);
        if (!betas.empty()) c.betas = parse_vector(betas);
        if (!sweep_gamma.empty()) c.sweep_gamma = parse_vector(sweep_gamma);
        c.finalize();
    }
};

std::string sink; // --config is pre-scanned; CLI11 just needs to accept it

void add_problem_flags(CLI::App* cmd, degel::RunConfig& c, VectorFlags& v) {
    cmd->add_option("--config", sink, "JSON config file; flags override it");
    cmd->add_option("--dim", c.dim, "space dimension (1, 2, 3)");
    cmd->add_option("--gamma", c.gamma, "degeneracy exponent, >= 0");
    cmd->add_option("--operator", c.op, "neg-laplacian | pucci-minus | pucci-plus");
    cmd->add_option("--lambda", c.lambda, "lower ellipticity constant");
    cmd->add_option("--Lambda", c.Lambda, "upper ellipticity constant");
    cmd->add_option("--p", v.p, "frozen slope, comma separated");
    cmd->add_option("--boundary", c.boundary,
                    "boundary preset: linear-x1 | radial-3-2 | saddle | harmonic-x1x2 | "
                    "radial-power:<a> | zero");
    cmd->add_option("--boundary-scale", c.boundary_scale, "multiplies the boundary preset");
    cmd->add_option("--f", c.f, "rhs preset: zero | const:<c> | example-rhs");
    cmd->add_option(
        "--f-const",
        [&c](const std::vector<std::string>& vals) {
            c.f = "const:" + vals.back();
            return true;
        },
        "constant right-hand side (shorthand for --f const:<c>)");
    cmd->add_option("--n", c.n, "grid points per axis");
    cmd->add_option("--stencil-w", c.stencil_w, "stencil radius in grid steps");
    cmd->add_option("--tol", c.tol, "residual tolerance; <0 = 1e-8*max(1,||f||)");
    cmd->add_option("--max-iters", c.max_iters, "sweep budget");
    cmd->add_option("--out-prefix", c.out_prefix, "output path prefix");
    cmd->add_option("--seed", c.seed, "seed for randomized suites");
}

template <typename Fn1, typename Fn2, typename Fn3>
int run_dim(int dim, Fn1&& f1, Fn2&& f2, Fn3&& f3) {
    switch (dim) {
        case 1: return f1();
        case 2: return f2();
        case 3: return f3();
    }
    throw degel::ConfigError("dim must be 1, 2 or 3");
}

} // namespace

int main(int argc, char** argv) {
    try {
        // pre-scan for --config so file values become the parse defaults
        std::string config_path;
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
        degel::RunConfig c = load_config(config_path);
        VectorFlags v;

        CLI::App app{"degenerate elliptic laboratory"};
        app.require_subcommand(1);

        auto* solve_cmd = app.add_subcommand("solve", "solve the Dirichlet problem");
        add_problem_flags(solve_cmd, c, v);

        auto* reg_cmd = app.add_subcommand("regularity", "oscillation profile and exponent fit");
        add_problem_flags(reg_cmd, c, v);
        reg_cmd->add_option("--rho", c.rho, "scale ratio of the profile");
        reg_cmd->add_option("--levels", c.levels, "number of dyadic scales");
        reg_cmd->add_option("--center", v.center, "profile center, comma separated");
        reg_cmd->add_option("--betas", v.betas, "Holder exponents to report, comma separated");
        reg_cmd->add_option("--analytic", c.analytic,
                            "analyze an analytic preset instead of solving");
        reg_cmd->add_option("--input", c.input, "analyze a stored solution CSV");
        reg_cmd->add_option("--sweep-gamma", v.sweep_gamma,
                            "fit the closed-form family exponent per gamma, comma separated");

        auto* flat_cmd = app.add_subcommand("flatness", "improvement-of-flatness trace");
        add_problem_flags(flat_cmd, c, v);
        flat_cmd->add_option("--rho", c.rho, "scale ratio");
        flat_cmd->add_option("--levels", c.levels, "max levels");
        flat_cmd->add_option("--alpha", c.alpha, "target exponent, must be < 1/(1+gamma)");
        flat_cmd->add_option("--analytic", c.analytic,
                             "analyze an analytic preset instead of solving");
        flat_cmd->add_option("--input", c.input, "analyze a stored solution CSV");
        flat_cmd->add_flag("--normalize", c.normalize,
                           "kappa-normalize to osc <= 1, ||f|| <= eps0 before tracing");
        flat_cmd->add_option("--eps0", c.eps0, "normalization target for ||f||");

        auto* dbl_cmd = app.add_subcommand("doubling", "doubling-variables Lipschitz certificate");
        add_problem_flags(dbl_cmd, c, v);
        dbl_cmd->add_option("--r", c.dbl_r, "pair-scan ball radius");
        dbl_cmd->add_option("--x0", v.x0, "localization center in B_{r/2}, comma separated");
        dbl_cmd->add_option("--L1", c.dbl_L1, "modulus weight");
        dbl_cmd->add_option("--L2", c.dbl_L2, "localization weight; <0 = (4/r)^2");
        dbl_cmd->add_option("--omega0", c.dbl_omega0, "concavity of the modulus");
        dbl_cmd->add_option("--a0", c.dbl_a0, "slope threshold (recorded)");
        dbl_cmd->add_option("--analytic", c.analytic,
                            "analyze an analytic preset instead of solving");
        dbl_cmd->add_option("--input", c.input, "analyze a stored solution CSV");

        auto* eq_cmd =
            app.add_subcommand("equivalence", "degenerate vs gradient-free solve with f = 0");
        add_problem_flags(eq_cmd, c, v);

        auto* prop_cmd = app.add_subcommand("proptest", "randomized operator property suites");
        add_problem_flags(prop_cmd, c, v);
        prop_cmd->add_option("--samples", c.samples, "samples per suite");

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : degel::kExitConfig;
        }
        v.apply(c);

        using namespace degel::cli;
        if (*solve_cmd)
            return run_dim(
                c.dim, [&] { return cmd_solve<1>(c); }, [&] { return cmd_solve<2>(c); },
                [&] { return cmd_solve<3>(c); });
        if (*reg_cmd)
            return run_dim(
                c.dim, [&] { return cmd_regularity<1>(c); }, [&] { return cmd_regularity<2>(c); },
                [&] { return cmd_regularity<3>(c); });
        if (*flat_cmd)
            return run_dim(
                c.dim, [&] { return cmd_flatness<1>(c); }, [&] { return cmd_flatness<2>(c); },
                [&] { return cmd_flatness<3>(c); });
        if (*dbl_cmd)
            return run_dim(
                c.dim, [&] { return cmd_doubling<1>(c); }, [&] { return cmd_doubling<2>(c); },
                [&] { return cmd_doubling<3>(c); });
        if (*eq_cmd)
            return run_dim(
                c.dim, [&] { return cmd_equivalence<1>(c); }, [&] { return cmd_equivalence<2>(c); },
                [&] { return cmd_equivalence<3>(c); });
        if (*prop_cmd) return cmd_proptest(c);
        throw degel::ConfigError("no command given");
    } catch (const degel::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return degel::kExitConfig;
    } catch (const degel::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return degel::kExitConfig;
    } catch (const degel::InsufficientData& e) {
        std::fprintf(stderr, "insufficient data: %s\n", e.what());
        return degel::kExitInsufficientData;
    } catch (const degel::NumericalFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return degel::kExitNumerical;
    }
}
