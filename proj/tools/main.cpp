#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "codedspline/errors.hpp"
#include "codedspline/experiment.hpp"
#include "codedspline/rng.hpp"
#include "codedspline/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;

int cmd_sweep(const std::string& config_path, const std::string& out_override) {
    codedspline::ExperimentConfig cfg = codedspline::parse_config(config_path);
    const std::string out_path = out_override.empty() ? cfg.output_path : out_override;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw codedspline::ConfigError("cannot open output: " + out_path);
        codedspline::run_sweep(cfg, &out);
        std::cerr << "wrote " << out_path << "\n";
    } else {
        codedspline::run_sweep(cfg, &std::cout);
    }
    return kExitOk;
}

int cmd_slope(const std::string& in_path, const std::string& out_path) {
    const auto rows = codedspline::parse_csv(in_path);
    const auto fit = codedspline::fit_slope(rows);
    std::cout << "slope " << fit.slope << "\nintercept " << fit.intercept << "\nr_squared "
              << fit.r_squared << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw codedspline::ConfigError("cannot open output: " + out_path);
        codedspline::write_loglog_csv(rows, fit, out);
    }
    return kExitOk;
}

int cmd_validate(const std::string& suite) {
    const auto results = codedspline::validate(suite);
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << suite << "." << r.name << ": "
                  << r.detail << "\n";
        if (!r.pass) all_ok = false;
    }
    return all_ok ? kExitOk : kExitValidation;
}

int cmd_run(const std::string& function_id, std::size_t n, std::size_t k, std::size_t gamma,
            const std::string& strategy, std::uint64_t seed, double a, double j_const,
            double lambda_e) {
    const auto& f = codedspline::registry_get(function_id);
    codedspline::AttackPlan plan;
    plan.strategy = codedspline::strategy_from_string(strategy);
    plan.gamma = gamma;
    const double lambda_d = codedspline::choose_lambda_d(n, a, j_const, 1.0);
    const auto rep = codedspline::run_repeated(f, k, n, plan, lambda_d, lambda_e, 1, seed);
    const auto& res = rep.runs.front();
    std::cout << "function " << function_id << "\nN " << n << "\nK " << k << "\ngamma " << gamma
              << "\nstrategy " << strategy << "\nlambda_d " << lambda_d << "\nseed " << seed
              << "\navg_error " << res.avg_error << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded computing with smoothing-spline encoders/decoders"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, suite, function_id = "xsinx",
                                                       strategy = "cluster_max";
    std::size_t n = 512, k = 10, gamma = 0;
    std::uint64_t seed = 0;
    double a = 0.5, j_const = 1.0, lambda_e = 0.0;

    auto* sweep = app.add_subcommand("sweep", "run a convergence sweep from a config file");
    sweep->add_option("--config", config_path, "JSON config path")->required();
    sweep->add_option("--out", out_path, "CSV output path (overrides config)");

    auto* slope = app.add_subcommand("slope", "fit a log-log slope to sweep output");
    slope->add_option("--in", in_path, "sweep CSV path")->required();
    slope->add_option("--out", out_path, "log-log CSV output path");

    auto* validate = app.add_subcommand("validate", "run a named property suite");
    validate->add_option("--suite", suite, "splines | kernels | norms | impossibility")
        ->required();

    auto* run = app.add_subcommand("run", "run a single pipeline instance");
    run->add_option("--function", function_id, "function id");
    run->add_option("--n", n, "worker count N");
    run->add_option("--k", k, "input count K");
    run->add_option("--gamma", gamma, "corruption budget");
    run->add_option("--strategy", strategy, "attack strategy");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--a", a, "adversary growth exponent for the lambda rule");
    run->add_option("--J", j_const, "lambda rule constant");
    run->add_option("--lambda-e", lambda_e, "encoder smoothing parameter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(config_path, out_path);
        if (slope->parsed()) return cmd_slope(in_path, out_path);
        if (validate->parsed()) return cmd_validate(suite);
        return cmd_run(function_id, n, k, gamma, strategy, seed, a, j_const, lambda_e);
    } catch (const codedspline::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const codedspline::NotFound& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const codedspline::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
