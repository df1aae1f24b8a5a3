#include "codedspline/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "codedspline/constants.hpp"
#include "codedspline/dense_oracle.hpp"
#include "codedspline/errors.hpp"
#include "codedspline/rng.hpp"
#include "codedspline/simulation.hpp"
#include "codedspline/sobolev_analysis.hpp"

namespace codedspline {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::size_t GammaRule::gamma_for(std::size_t n) const {
    if (kind == Kind::Fixed) return fixed;
    return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), exponent)));
}

double GammaRule::lambda_exponent() const {
    return kind == Kind::Fixed ? 0.0 : exponent;
}

namespace {

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto need = [&](const char* field) -> const nlohmann::json& {
        if (!j.contains(field)) throw ConfigError(std::string("missing field: ") + field);
        return j.at(field);
    };
    try {
        cfg.function_id = need("function_id").get<std::string>();
        cfg.num_inputs = need("K").get<std::size_t>();
        if (j.contains("N_list")) {
            cfg.n_list = j.at("N_list").get<std::vector<std::size_t>>();
        } else if (j.contains("N_min") && j.contains("N_max") && j.contains("points")) {
            const auto lo = j.at("N_min").get<double>();
            const auto hi = j.at("N_max").get<double>();
            const auto pts = j.at("points").get<std::size_t>();
            if (pts < 1 || !(lo >= 2) || !(hi >= lo)) throw ConfigError("bad field: N_min/N_max/points");
            for (std::size_t i = 0; i < pts; ++i) {
                const double f = pts == 1 ? 0.0
                                          : static_cast<double>(i) / static_cast<double>(pts - 1);
                const auto n = static_cast<std::size_t>(
                    std::llround(lo * std::pow(hi / lo, f)));
                if (cfg.n_list.empty() || n > cfg.n_list.back()) cfg.n_list.push_back(n);
            }
        } else {
            throw ConfigError("missing field: N_list (or N_min/N_max/points)");
        }
        const auto& gr = need("gamma_rule");
        if (gr.contains("power")) {
            cfg.gamma_rule.kind = GammaRule::Kind::Power;
            cfg.gamma_rule.exponent = gr.at("power").get<double>();
            if (!(cfg.gamma_rule.exponent >= 0.0 && cfg.gamma_rule.exponent < 1.0))
                throw ConfigError("bad field: gamma_rule.power must lie in [0,1)");
        } else if (gr.contains("fixed")) {
            cfg.gamma_rule.kind = GammaRule::Kind::Fixed;
            cfg.gamma_rule.fixed = gr.at("fixed").get<std::size_t>();
        } else {
            throw ConfigError("bad field: gamma_rule needs power or fixed");
        }
        cfg.j_const = j.value("J", kDefaultJ);
        cfg.c_lambda = j.value("C_lambda", kDefaultCLambda);
        cfg.lambda_e = j.value("lambda_e", 0.0);
        cfg.strategy = strategy_from_string(j.value("strategy", std::string("cluster_max")));
        cfg.repetitions = j.value("repetitions", std::size_t{20});
        cfg.master_seed = j.value("master_seed", std::uint64_t{0});
        cfg.output_path = j.value("output_path", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    if (cfg.num_inputs < 2) throw ConfigError("bad field: K must be >= 2");
    if (cfg.repetitions < 1) throw ConfigError("bad field: repetitions must be >= 1");
    if (cfg.n_list.empty()) throw ConfigError("bad field: N_list empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < cfg.num_inputs) throw ConfigError("bad field: N_list entry below K");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
            throw ConfigError("bad field: N_list not strictly increasing");
    }
    if (!(cfg.j_const > 0.0)) throw ConfigError("bad field: J must be positive");
    if (!(cfg.c_lambda > 0.0)) throw ConfigError("bad field: C_lambda must be positive");
    if (cfg.lambda_e < 0.0) throw ConfigError("bad field: lambda_e must be nonnegative");
    return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return config_from_json(j);
}

std::string canonical_config(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["function_id"] = cfg.function_id;
    j["K"] = cfg.num_inputs;
    j["N_list"] = cfg.n_list;
    if (cfg.gamma_rule.kind == GammaRule::Kind::Power)
        j["gamma_rule"] = {{"power", cfg.gamma_rule.exponent}};
    else
        j["gamma_rule"] = {{"fixed", cfg.gamma_rule.fixed}};
    j["J"] = cfg.j_const;
    j["C_lambda"] = cfg.c_lambda;
    j["lambda_e"] = cfg.lambda_e;
    j["strategy"] = strategy_name(cfg.strategy);
    j["repetitions"] = cfg.repetitions;
    j["master_seed"] = cfg.master_seed;
    j["output_path"] = cfg.output_path;
    return j.dump(2) + "\n";
}

std::string csv_header() { return "N,gamma,lambda_d,mean_error,stddev,repetitions,seed\n"; }

std::string csv_line(const SweepRow& row) {
    std::string out = std::to_string(row.n);
    out += ',' + std::to_string(row.gamma);
    out += ',' + fmt_g17(row.lambda_d);
    out += ',' + fmt_g17(row.mean_error);
    out += ',';
    if (row.stddev) out += fmt_g17(*row.stddev);
    out += ',' + std::to_string(row.repetitions);
    out += ',' + std::to_string(row.seed);
    out += '\n';
    return out;
}

std::vector<SweepRow> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty csv: " + path);
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepRow row;
        const auto next = [&]() {
            if (!std::getline(ss, field, ',')) throw ConfigError("short csv row: " + line);
            return field;
        };
        row.n = std::stoul(next());
        row.gamma = std::stoul(next());
        row.lambda_d = std::stod(next());
        row.mean_error = std::stod(next());
        const std::string sd = next();
        if (!sd.empty()) row.stddev = std::stod(sd);
        row.repetitions = std::stoul(next());
        row.seed = std::stoull(next());
        rows.push_back(row);
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream* csv) {
    const ComputeFunction& f = registry_get(cfg.function_id);
    if (csv) {
        *csv << csv_header();
        csv->flush();
    }
    std::vector<SweepRow> rows;
    for (const std::size_t n : cfg.n_list) {
        SweepRow row;
        row.n = n;
        row.gamma = cfg.gamma_rule.gamma_for(n);
        if (row.gamma > n) throw BudgetExceeded("gamma rule exceeds N");
        row.lambda_d =
            choose_lambda_d(n, cfg.gamma_rule.lambda_exponent(), cfg.j_const, cfg.c_lambda);
        row.repetitions = cfg.repetitions;
        row.seed = derive_seed(cfg.master_seed, n);
        AttackPlan plan;
        plan.gamma = row.gamma;
        plan.strategy = cfg.strategy;
        const RepeatedResult rep = run_repeated(f, cfg.num_inputs, n, plan, row.lambda_d,
                                                cfg.lambda_e, cfg.repetitions, row.seed);
        row.mean_error = rep.mean_error;
        row.stddev = rep.stddev;
        rows.push_back(row);
        if (csv) {
            *csv << csv_line(row);
            csv->flush();
        }
    }
    return rows;
}

SlopeFit fit_slope(const std::vector<SweepRow>& rows) {
    if (rows.size() < 3) throw SlopeUndefined("need at least 3 rows");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    const double n = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        if (!(row.mean_error > 0.0)) throw SlopeUndefined("nonpositive mean error");
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.mean_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw SlopeUndefined("degenerate abscissae");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& row : rows) {
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.mean_error);
        const double r = y - (fit.slope * x + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

void write_loglog_csv(const std::vector<SweepRow>& rows, const SlopeFit& fit,
                      std::ostream& os) {
    os << "ln_N,ln_mean_error,fitted\n";
    for (const auto& row : rows) {
        const double x = std::log(static_cast<double>(row.n));
        os << fmt_g17(x) << ',' << fmt_g17(std::log(row.mean_error)) << ','
           << fmt_g17(fit.slope * x + fit.intercept) << '\n';
    }
    os << "# slope=" << fmt_g17(fit.slope) << " intercept=" << fmt_g17(fit.intercept)
       << " r_squared=" << fmt_g17(fit.r_squared) << '\n';
}

// ---------------------------------------------------------------------------
// validation suites
// ---------------------------------------------------------------------------

double oracle_equivalence_worst_error(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t trial = 0; trial < count; ++trial) {
        const std::size_t n = 3 + rng.next_index(48);  // 3..50
        std::vector<double> t;
        while (true) {
            t.resize(n);
            for (auto& v : t) v = rng.uniform(0.0, 1.0);
            std::sort(t.begin(), t.end());
            double dmin = 1.0;
            for (std::size_t i = 0; i + 1 < n; ++i) dmin = std::min(dmin, t[i + 1] - t[i]);
            if (dmin > 1e-4) break;  // keep the dense system well conditioned
        }
        std::vector<double> y(n);
        for (auto& v : y) v = rng.uniform(-1.0, 1.0);
        const double lambda = std::pow(10.0, rng.uniform(-6.0, 0.0));

        const SplineModel banded = fit({t, y}, lambda);
        const oracle::DenseFit dense = oracle::dense_fit(t, y, lambda);
        double scale = 0.0, diff = 0.0;
        for (std::size_t k = 0; k <= 36; ++k) {
            const double x = static_cast<double>(k) / 36.0;
            const double dv = oracle::dense_evaluate(dense, x);
            scale = std::max(scale, std::abs(dv));
            diff = std::max(diff, std::abs(banded.value(x) - dv));
        }
        // kernel coefficients through the residual identity c = (y - g)/(n*lambda)
        double cdiff = 0.0, cscale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cscale = std::max(cscale, std::abs(dense.coef_kernel[static_cast<Eigen::Index>(i)]));
            cdiff = std::max(cdiff, std::abs(banded.coef_kernel()[i] -
                                             dense.coef_kernel[static_cast<Eigen::Index>(i)]));
        }
        worst = std::max(worst, diff / (scale + 1e-30));
        worst = std::max(worst, cdiff / (cscale + 1e-30));
    }
    return worst;
}

namespace {

std::vector<CheckResult> validate_splines() {
    std::vector<CheckResult> out;
    const double worst = oracle_equivalence_worst_error(200, 20240601);
    out.push_back({"dense_oracle_equivalence", worst <= kSolverRelTol,
                   "worst rel err " + fmt_g17(worst)});

    // null-space lines reproduced across extreme smoothing
    bool lines_ok = true;
    double worst_line = 0.0;
    std::vector<double> t(9);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.05 + 0.9 * static_cast<double>(i) / 8.0;
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = 2.0 * t[i] + 1.0;
    for (const double lambda : {1e-6, 1.0, 1e6}) {
        const SplineModel m = fit({t, y}, lambda);
        for (std::size_t k = 0; k <= 100; ++k) {
            const double x = static_cast<double>(k) / 100.0;
            worst_line = std::max(worst_line, std::abs(m.value(x) - (2.0 * x + 1.0)));
        }
    }
    lines_ok = worst_line <= 1e-9;
    out.push_back({"null_space_exactness", lines_ok, "sup deviation " + fmt_g17(worst_line)});

    // interpolation limit
    Rng rng(77);
    std::vector<double> ti(12), yi(12);
    for (std::size_t i = 0; i < ti.size(); ++i)
        ti[i] = (static_cast<double>(i) + rng.uniform(0.2, 0.8)) / 12.0;
    for (auto& v : yi) v = rng.uniform(-1.0, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const double lambda : {1e-4, 1e-8, 1e-12}) {
        const SplineModel m = fit({ti, yi}, lambda);
        double resid = 0.0;
        for (std::size_t i = 0; i < ti.size(); ++i)
            resid = std::max(resid, std::abs(m.knot_values()[i] - yi[i]));
        if (!(resid < prev)) monotone = false;
        prev = resid;
    }
    out.push_back({"interpolation_limit", monotone, "max residual " + fmt_g17(prev)});
    return out;
}

std::vector<CheckResult> validate_kernels() {
    std::vector<CheckResult> out;
    bool bound_ok = true;
    std::string detail;
    for (const double lambda : {1.0, 0.1, 0.01, 1e-3, 1e-4}) {
        const double limit = 9.0 / std::sqrt(2.0) * std::pow(lambda, -0.25);
        double sup = 0.0;
        for (std::size_t i = 0; i < kSupGridPoints; ++i)
            for (std::size_t j = 0; j < kSupGridPoints; ++j) {
                const double x = static_cast<double>(i) / (kSupGridPoints - 1);
                const double s = static_cast<double>(j) / (kSupGridPoints - 1);
                sup = std::max(sup, std::abs(kernel_K(x, s, lambda)));
            }
        if (!(sup < limit)) bound_ok = false;
        detail += fmt_g17(sup) + "<" + fmt_g17(limit) + " ";
    }
    out.push_back({"kernel_sup_bound", bound_ok, detail});

    Rng rng(4242);
    double asym = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double x = rng.next_double();
        const double s = rng.next_double();
        asym = std::max(asym, std::abs(kernel_K(x, s, 0.01) - kernel_K(s, x, 0.01)));
    }
    out.push_back({"kernel_symmetry", asym <= 1e-12, "max asymmetry " + fmt_g17(asym)});

    // unit mass at an interior point once the bandwidth is narrow
    const std::size_t n = kSimpsonPoints;
    double acc = kernel_K(0.5, 0.0, 1e-4) + kernel_K(0.5, 1.0, 1e-4);
    for (std::size_t i = 1; i + 1 < n; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) *
               kernel_K(0.5, static_cast<double>(i) / static_cast<double>(n - 1), 1e-4);
    acc /= 3.0 * static_cast<double>(n - 1);
    out.push_back({"kernel_unit_mass", std::abs(acc - 1.0) <= 1e-3, "integral " + fmt_g17(acc)});

    bool limit_ok = true;
    for (const double u : {0.0, 1.0, 2.0}) {
        const double lambda = 1e-8;
        const double bw = std::pow(lambda, 0.25);
        const double v = bw * kernel_K(0.5, 0.5 + bw * u, lambda);
        if (std::abs(v - kernel_silverman(u)) > 1e-2) limit_ok = false;
    }
    out.push_back({"kernel_interior_limit", limit_ok, "lambda 1e-8, u in {0,1,2}"});

    const auto conv = check_kernel_weight_convergence(
        [](std::size_t n) { return std::pow(static_cast<double>(n), -1.6); }, {64, 128, 256});
    std::string sups;
    for (const double s : conv.sup_diffs) sups += fmt_g17(s) + " ";
    out.push_back({"weight_function_convergence", conv.pass, "sup diffs " + sups});
    return out;
}

FunctionHandle poly_handle(std::vector<double> coeffs) {
    const auto horner = [](const std::vector<double>& c, double x) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    };
    std::vector<double> d1(coeffs.size() > 1 ? coeffs.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d1[i - 1] = coeffs[i] * static_cast<double>(i);
    std::vector<double> d2(d1.size() > 1 ? d1.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < d1.size(); ++i) d2[i - 1] = d1[i] * static_cast<double>(i);
    FunctionHandle f;
    f.eval = [coeffs, horner](double x) { return horner(coeffs, x); };
    f.deriv1 = [d1, horner](double x) { return horner(d1, x); };
    f.deriv2 = [d2, horner](double x) { return horner(d2, x); };
    return f;
}

FunctionHandle sine_handle(double amp, double freq, double phase) {
    FunctionHandle f;
    f.eval = [=](double x) { return amp * std::sin(freq * x + phase); };
    f.deriv1 = [=](double x) { return amp * freq * std::cos(freq * x + phase); };
    f.deriv2 = [=](double x) { return -amp * freq * freq * std::sin(freq * x + phase); };
    return f;
}

std::vector<FunctionHandle> norm_corpus() {
    std::vector<FunctionHandle> fs;
    fs.push_back(poly_handle({1.0}));
    fs.push_back(poly_handle({0.0, 1.0}));
    fs.push_back(poly_handle({0.0, 0.0, 1.0}));
    fs.push_back(poly_handle({0.0, 0.0, 0.0, 1.0}));
    fs.push_back(poly_handle({0.0, 0.0, 0.0, 0.0, 1.0}));
    fs.push_back(poly_handle({0.0, 0.0, 0.0, 0.0, 0.0, 1.0}));
    fs.push_back(poly_handle({-1.0, 6.0, -12.0, 8.0}));  // (2t-1)^3
    fs.push_back(poly_handle({0.5, 1.0, -2.0, 0.0, 1.5}));
    fs.push_back(sine_handle(1.0, 2.0 * kPi, 0.0));
    fs.push_back(sine_handle(1.0, 2.0 * kPi, kPi / 2.0));
    fs.push_back(sine_handle(1.0, 4.0 * kPi, 0.0));
    fs.push_back(sine_handle(0.5, kPi, 0.3));
    fs.push_back(sine_handle(2.0, 3.0 * kPi, 1.1));
    fs.push_back(sine_handle(1.0, kPi, kPi / 2.0));
    // fitted splines on fixed data
    Rng rng(1234);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<double> t(10), y(10);
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = (static_cast<double>(i) + rng.uniform(0.2, 0.8)) / 10.0;
        for (auto& v : y) v = rng.uniform(-1.0, 1.0);
        fs.push_back(from_spline(fit({t, y}, std::pow(10.0, rng.uniform(-5.0, -1.0)))));
    }
    return fs;
}

std::vector<CheckResult> validate_norms() {
    std::vector<CheckResult> out;
    const auto corpus = norm_corpus();
    bool all_ok = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& f : corpus) {
        const NormEquivalenceReport rep = check_norm_equivalence(f);
        lo = std::min(lo, rep.ratio);
        hi = std::max(hi, rep.ratio);
        if (!rep.pass) all_ok = false;
    }
    out.push_back({"norm_equivalence_corpus", all_ok,
                   "20 functions, ratios in [" + fmt_g17(lo) + ", " + fmt_g17(hi) + "]"});

    bool interp_ok = true;
    for (const double freq : {2.0 * kPi, 4.0 * kPi}) {
        const auto rep = check_interpolation_inequality(sine_handle(1.0, freq, 0.0));
        if (!rep.hypothesis_met || !rep.pass) interp_ok = false;
    }
    FunctionHandle zero;
    zero.eval = [](double) { return 0.0; };
    zero.deriv1 = zero.eval;
    zero.deriv2 = zero.eval;
    if (!check_interpolation_inequality(zero).pass) interp_ok = false;
    out.push_back({"interpolation_inequality", interp_ok, "sin(2pi t), sin(4pi t), zero"});
    return out;
}

std::vector<CheckResult> validate_impossibility() {
    std::vector<CheckResult> out;
    const ComputeFunction& f = registry_get("identity");
    const std::vector<std::size_t> schedule{512, 1024, 2048, 4096};
    // lambda_d rule: a = 0 with J = 0.3 keeps the honest baseline deep in its
    // decaying regime across the schedule
    std::vector<double> attacked, honest;
    for (const std::size_t n : schedule) {
        const double lambda_d = choose_lambda_d(n, 0.0, 0.3, 1.0);
        AttackPlan plan;
        plan.strategy = Strategy::ImpossibilityPoly;
        plan.gamma = n / 4;
        attacked.push_back(
            run_repeated(f, 10, n, plan, lambda_d, 0.0, 20, 9001).mean_error);
        plan.strategy = Strategy::None;
        plan.gamma = 0;
        honest.push_back(run_repeated(f, 10, n, plan, lambda_d, 0.0, 20, 9001).mean_error);
    }
    const double ratio = attacked.back() / attacked.front();
    out.push_back({"impossibility_nonvanishing", ratio >= 0.5,
                   "mean_error(4096)/mean_error(512) = " + fmt_g17(ratio)});
    const double decay = honest.front() / honest.back();
    out.push_back({"honest_decay", decay >= 10.0,
                   "mean_error(512)/mean_error(4096) = " + fmt_g17(decay)});
    return out;
}

}  // namespace

std::vector<CheckResult> validate(const std::string& suite) {
    if (suite == "splines") return validate_splines();
    if (suite == "kernels") return validate_kernels();
    if (suite == "norms") return validate_norms();
    if (suite == "impossibility") return validate_impossibility();
    throw NotFound("unknown suite: " + suite);
}

}  // namespace codedspline
