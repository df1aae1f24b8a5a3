#include "codedspline/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "codedspline/errors.hpp"
#include "codedspline/rng.hpp"

namespace codedspline {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

std::vector<double> clamp_vec(std::vector<double> v, double bound) {
    for (double& x : v) x = std::clamp(x, -bound, bound);
    return v;
}

ComputeFunction make_scalar(const std::string& id, double lo, double hi, double bound,
                            double nu, double eta, std::function<double(double)> f) {
    ComputeFunction cf;
    cf.id = id;
    cf.dim_in = cf.dim_out = 1;
    cf.bound = bound;
    cf.box_lo = {lo};
    cf.box_hi = {hi};
    cf.lipschitz_hint = nu;
    cf.curvature_hint = eta;
    cf.eval = [f, bound](const std::vector<double>& x) {
        return std::vector<double>{std::clamp(f(x.front()), -bound, bound)};
    };
    return cf;
}

struct MlpLayer {
    std::vector<std::vector<double>> w;
    std::vector<double> b;
    bool tanh_act = false;
};

ComputeFunction mlp_from_json(const nlohmann::json& j, const std::string& id) {
    ComputeFunction cf;
    cf.id = id;
    try {
        cf.dim_in = j.at("d").get<std::size_t>();
        cf.dim_out = j.at("m").get<std::size_t>();
        cf.bound = j.at("M").get<double>();
        std::vector<MlpLayer> layers;
        for (const auto& jl : j.at("layers")) {
            MlpLayer layer;
            layer.w = jl.at("w").get<std::vector<std::vector<double>>>();
            layer.b = jl.at("b").get<std::vector<double>>();
            const auto act = jl.at("act").get<std::string>();
            if (act != "tanh" && act != "linear") throw ConfigError("unknown activation: " + act);
            layer.tanh_act = act == "tanh";
            if (layer.w.size() != layer.b.size()) throw ConfigError("w/b shape mismatch");
            layers.push_back(std::move(layer));
        }
        const double bound = cf.bound;
        cf.eval = [layers, bound](const std::vector<double>& x) {
            std::vector<double> cur = x;
            for (const auto& layer : layers) {
                std::vector<double> next(layer.w.size());
                for (std::size_t r = 0; r < layer.w.size(); ++r) {
                    double acc = layer.b[r];
                    for (std::size_t c = 0; c < layer.w[r].size(); ++c)
                        acc += layer.w[r][c] * cur[c];
                    next[r] = layer.tanh_act ? std::tanh(acc) : acc;
                }
                cur = std::move(next);
            }
            return clamp_vec(std::move(cur), bound);
        };
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad MLP fixture: ") + e.what());
    }
    cf.box_lo.assign(cf.dim_in, -1.0);
    cf.box_hi.assign(cf.dim_in, 1.0);
    return cf;
}

// Fixed-weight stand-in network shipped with the library (also available as
// data/mlp_small.json).
const char* kMlpSmallJson = R"JSON(
{"layers":[
 {"w":[[0.2563,-0.0416,-1.7637,0.382],[0.1673,0.3532,-0.0482,-0.4188],
       [-0.7952,-1.9317,-0.1162,-0.5025],[1.516,-0.1198,0.8613,0.7238],
       [-1.1167,-0.6555,0.435,0.1122],[1.4286,0.8688,-0.3042,0.0013],
       [1.5574,0.1894,0.4599,-0.4612],[-0.9178,-0.1582,1.1341,0.0461]],
  "b":[-0.0683,0.6143,-0.0719,0.2497,-0.2645,-0.1539,-0.0772,-0.0394],
  "act":"tanh"},
 {"w":[[-0.2869,0.2799,-0.5556,-0.1404,0.6818,0.125,-0.6707,-0.0558],
       [0.2422,-0.8463,-0.4469,-0.7965,0.3272,-0.0521,-0.9502,0.9511]],
  "b":[-0.1414,0.109],
  "act":"linear"}],
 "d":4,"m":2,"M":3.0}
)JSON";

std::map<std::string, ComputeFunction> build_registry() {
    std::map<std::string, ComputeFunction> reg;
    reg["xsinx"] = make_scalar("xsinx", 0.0, kTwoPi, kTwoPi, 1.0 + kTwoPi, 2.0 + kTwoPi,
                               [](double x) { return x * std::sin(x); });
    reg["identity"] = make_scalar("identity", 0.0, 1.0, 2.0, 1.0, 0.0,
                                  [](double x) { return x; });
    reg["cubic"] = make_scalar("cubic", -1.5, 1.5, 2.0, 5.75, 9.0,
                               [](double x) { return x * x * x - x; });
    reg["mlp_small"] = mlp_from_json(nlohmann::json::parse(kMlpSmallJson), "mlp_small");
    return reg;
}

}  // namespace

const ComputeFunction& registry_get(const std::string& id) {
    static const std::map<std::string, ComputeFunction> registry = build_registry();
    const auto it = registry.find(id);
    if (it == registry.end()) throw NotFound("unknown function id: " + id);
    return it->second;
}

ComputeFunction mlp_from_json_text(const std::string& text, const std::string& id) {
    return mlp_from_json(nlohmann::json::parse(text, nullptr, true), id);
}

ComputeFunction mlp_from_json_file(const std::string& path, const std::string& id) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open MLP fixture: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return mlp_from_json_text(ss.str(), id);
}

PipelineResult run_pipeline(const CodedTask& task, const ComputeFunction& f,
                            const AttackPlan& plan, double lambda_d, double lambda_e) {
    validate_task(task);
    if (f.dim_in != task.dim_in) throw ConfigError("function/task input dimension mismatch");
    const std::size_t k = task.num_inputs();
    const std::size_t n = task.num_workers();

    // assign inputs to encoder points in sorted order; remember where each
    // original input went
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return task.inputs[a] < task.inputs[b];
    });
    CodedTask sorted = task;
    for (std::size_t i = 0; i < k; ++i) sorted.inputs[i] = task.inputs[perm[i]];

    const VectorSpline encoder = design_encoder(sorted, lambda_e);
    const auto coded = encode(encoder, sorted.beta);

    std::vector<std::vector<double>> honest(n);
    for (std::size_t i = 0; i < n; ++i) honest[i] = f.eval(coded[i]);

    const auto corrupted = select_corrupted(plan, sorted);
    const auto responses = corrupt_responses(plan, corrupted, honest, sorted, encoder);

    const auto decoded = decode(sorted.beta, responses, lambda_d, sorted.alpha, sorted.bound);

    PipelineResult res;
    res.estimates.resize(k);
    res.per_point_sq_error.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t orig = perm[i];
        res.estimates[orig] = decoded[i];
        const auto truth = f.eval(task.inputs[orig]);
        double sq = 0.0;
        for (std::size_t j = 0; j < truth.size(); ++j) {
            const double diff = decoded[i][j] - truth[j];
            sq += diff * diff;
        }
        res.per_point_sq_error[orig] = sq;
    }
    res.avg_error = std::accumulate(res.per_point_sq_error.begin(),
                                    res.per_point_sq_error.end(), 0.0) /
                    static_cast<double>(k);
    res.meta = {n, k, plan.gamma, lambda_d, plan.strategy, plan.seed};
    return res;
}

std::size_t thread_cap() {
    if (const char* env = std::getenv("CODEDSPLINE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

RepeatedResult run_repeated(const ComputeFunction& f, std::size_t num_inputs,
                            std::size_t num_workers, const AttackPlan& plan_template,
                            double lambda_d, double lambda_e, std::size_t repetitions,
                            std::uint64_t master_seed) {
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    RepeatedResult out;
    out.runs.resize(repetitions);

    const auto run_one = [&](std::size_t rep) {
        const std::uint64_t seed = derive_seed(master_seed, rep);
        Rng rng(seed);
        std::vector<std::vector<double>> inputs(num_inputs, std::vector<double>(f.dim_in));
        for (auto& x : inputs)
            for (std::size_t d = 0; d < f.dim_in; ++d)
                x[d] = rng.uniform(f.box_lo[d], f.box_hi[d]);
        const CodedTask task = make_task(std::move(inputs), f.bound, f.dim_out, num_workers);
        AttackPlan plan = plan_template;
        plan.seed = derive_seed(seed, 0xa77ac0);
        out.runs[rep] = run_pipeline(task, f, plan, lambda_d, lambda_e);
    };

    const std::size_t workers = std::min(thread_cap(), repetitions);
    if (workers <= 1) {
        for (std::size_t rep = 0; rep < repetitions; ++rep) run_one(rep);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t rep = w; rep < repetitions; rep += workers) run_one(rep);
            });
        for (auto& th : pool) th.join();
    }

    double mean = 0.0;
    for (const auto& r : out.runs) mean += r.avg_error;
    mean /= static_cast<double>(repetitions);
    out.mean_error = mean;
    if (repetitions > 1) {
        double ss = 0.0;
        for (const auto& r : out.runs) ss += (r.avg_error - mean) * (r.avg_error - mean);
        out.stddev = std::sqrt(ss / static_cast<double>(repetitions - 1));
    }
    return out;
}

}  // namespace codedspline
