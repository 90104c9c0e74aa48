#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "synclab/estimators.hpp"
#include "synclab/io.hpp"
#include "synclab/records.hpp"
#include "synclab/reduction.hpp"

namespace synclab {

// Grid sweep over one experiment. Grids are kept in config-file order; points
// run in row-major cartesian order with the last grid varying fastest.
struct SweepConfig {
    std::string experiment;
    std::vector<std::pair<std::string, std::vector<std::string>>> grids;
    std::string output;
    int parallelism = 1;
    long budget = 10000;

    const std::vector<std::string>* grid(const std::string& key) const {
        for (const auto& [k, v] : grids)
            if (k == key) return &v;
        return nullptr;
    }

    long point_count() const {
        long count = 1;
        for (const auto& [k, v] : grids) count *= static_cast<long>(v.size());
        return count;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    return (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
}

inline std::string unquote(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace detail

// TOML-style key/value config: `experiment = "pca"`, `output = "out.csv"`,
// `parallelism = 2`, and one array per swept parameter, e.g.
// `lambda = [0.5, 1.0, 1.5]`. `#` starts a comment.
inline SweepConfig parse_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("parse_sweep_config: cannot open " + path);
    SweepConfig config;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter("parse_sweep_config: expected key = value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key == "experiment") {
            config.experiment = detail::unquote(value);
        } else if (key == "output") {
            config.output = detail::unquote(value);
        } else if (key == "parallelism") {
            config.parallelism = std::stoi(value);
        } else if (key == "budget") {
            config.budget = std::stol(value);
        } else if (!value.empty() && value.front() == '[') {
            if (value.back() != ']')
                throw invalid_parameter("parse_sweep_config: unterminated array for " + key);
            std::vector<std::string> items;
            std::string item;
            std::istringstream ss(value.substr(1, value.size() - 2));
            while (std::getline(ss, item, ',')) {
                item = detail::unquote(item);
                if (!item.empty()) items.push_back(item);
            }
            if (items.empty())
                throw invalid_parameter("parse_sweep_config: empty grid for " + key);
            config.grids.emplace_back(key, std::move(items));
        } else {
            config.grids.emplace_back(key, std::vector<std::string>{detail::unquote(value)});
        }
    }
    if (config.experiment.empty())
        throw invalid_parameter("parse_sweep_config: missing experiment");
    if (config.output.empty()) throw invalid_parameter("parse_sweep_config: missing output");
    if (config.grids.empty()) throw invalid_parameter("parse_sweep_config: no parameter grids");
    const char* env = std::getenv("SYNCLAB_THREADS");
    if (env != nullptr) config.parallelism = std::max(1, std::atoi(env));
    return config;
}

namespace detail {

struct PointParams {
    std::vector<std::pair<std::string, std::string>> values;

    std::string get(const std::string& key, const std::string& fallback = "") const {
        for (const auto& [k, v] : values)
            if (k == key) return v;
        if (fallback.empty())
            throw invalid_parameter("sweep: experiment requires parameter '" + key + "'");
        return fallback;
    }
    double get_double(const std::string& key, const std::string& fallback = "") const {
        return std::stod(get(key, fallback));
    }
    long get_long(const std::string& key, const std::string& fallback = "") const {
        return std::stol(get(key, fallback));
    }
};

inline ModelParams point_model_params(const PointParams& p) {
    ModelParams params;
    params.n = static_cast<int>(p.get_long("n"));
    params.L = static_cast<int>(p.get_long("L"));
    params.lambda = p.get_double("lambda");
    params.seed = static_cast<std::uint64_t>(p.get_long("seed", "1"));
    params.validate();
    return params;
}

}  // namespace detail

// The fixed metric registry, one column list per experiment.
inline std::vector<std::string> sweep_metric_names(const std::string& experiment) {
    if (experiment == "pca") return {"overlap_mean", "overlap_stderr", "top_eig_over_sqrt_n"};
    if (experiment == "advantage") return {"adv_squared", "stderr"};
    if (experiment == "reduction")
        return {"p_accept", "p_accept_lo", "p_accept_hi", "q_accept", "q_accept_lo", "q_accept_hi"};
    throw invalid_parameter("sweep: unknown experiment '" + experiment + "'");
}

inline RunRecord run_sweep_point(const std::string& experiment, const detail::PointParams& p) {
    RunRecord rec;
    rec.experiment = experiment;
    for (const auto& [k, v] : p.values) rec.set_param(k, v);
    if (experiment == "pca") {
        const ModelParams params = detail::point_model_params(p);
        const long trials = p.get_long("trials", "50");
        long double sum = 0.0L, sumsq = 0.0L, eig_sum = 0.0L;
        for (long t = 0; t < trials; ++t) {
            const std::uint64_t master =
                rng::derive_key(params.seed, rng::Purpose::trial, static_cast<std::uint64_t>(t));
            auto [x, obs] = sample_planted(params, master);
            const EigenPair top = top_eigenpair(obs.channels[0], 1e-6, 5000);
            const HermitianMatrix x_hat(top.vector * top.vector.adjoint());
            const double score = overlap_score(x_hat, x).value;
            sum += score;
            sumsq += static_cast<long double>(score) * score;
            eig_sum += top.value / std::sqrt(static_cast<double>(params.n));
        }
        const double mean = static_cast<double>(sum / trials);
        long double var = (trials > 1) ? (sumsq - trials * (sum / trials) * (sum / trials)) / (trials - 1) : 0.0L;
        if (var < 0) var = 0;
        rec.set_metric("overlap_mean", mean);
        rec.set_metric("overlap_stderr", static_cast<double>(std::sqrt(var / trials)));
        rec.set_metric("top_eig_over_sqrt_n", static_cast<double>(eig_sum / trials));
    } else if (experiment == "advantage") {
        const ModelParams params = detail::point_model_params(p);
        const int D = static_cast<int>(p.get_long("D"));
        const std::string method = p.get("method", "mc");
        AdvantageEstimate est;
        if (method == "mc") {
            est = advantage_mc(params, D, p.get_long("samples", "20000"));
        } else if (method == "two_replica") {
            est = advantage_two_replica_mc(params, D, p.get_long("samples", "20000"));
        } else if (method == "quadrature") {
            est = advantage_quadrature(params, D);
        } else if (method == "surrogate") {
            est = gaussian_surrogate(params, D, SurrogateMode::truncated);
        } else if (method == "surrogate_full") {
            est = gaussian_surrogate(params, D, SurrogateMode::full);
        } else {
            throw invalid_parameter("sweep: unknown advantage method '" + method + "'");
        }
        rec.set_metric("adv_squared", est.adv_squared);
        rec.set_metric("stderr", est.stderr_);
    } else if (experiment == "reduction") {
        const ModelParams params = detail::point_model_params(p);
        const double kappa = p.get_double("kappa", "1");
        const double c = p.get_double("c", "0.5");
        const long trials = p.get_long("trials", "200");
        const std::string est_name = p.get("estimator", "oracle_signal");
        const ReductionEstimator estimator = (est_name == "pca_channel1")
                                                 ? ReductionEstimator::pca_channel1
                                                 : ReductionEstimator::oracle_signal;
        const std::vector<RunRecord> rates = roc_experiment(params, kappa, c, trials, estimator);
        rec.set_metric("p_accept", rates[0].metric("accept_rate"));
        rec.set_metric("p_accept_lo", rates[0].metric("accept_lo"));
        rec.set_metric("p_accept_hi", rates[0].metric("accept_hi"));
        rec.set_metric("q_accept", rates[1].metric("accept_rate"));
        rec.set_metric("q_accept_lo", rates[1].metric("accept_lo"));
        rec.set_metric("q_accept_hi", rates[1].metric("accept_hi"));
    } else {
        throw invalid_parameter("sweep: unknown experiment '" + experiment + "'");
    }
    return rec;
}

// Executes the grid. Rows land in grid order; completed rows are flushed as
// they finish, and a rerun of an interrupted sweep skips rows already in the
// output file. A "# complete" marker ends a finished sweep.
inline void run_sweep(const SweepConfig& config) {
    const long total = config.point_count();
    if (total > config.budget)
        throw budget_exceeded("run_sweep: grid size " + std::to_string(total) +
                              " exceeds budget " + std::to_string(config.budget));
    const std::vector<std::string> metric_names = sweep_metric_names(config.experiment);

    long already_done = 0;
    bool have_header = false;
    {
        std::ifstream existing(config.output);
        if (existing) {
            std::string line;
            while (std::getline(existing, line)) {
                if (line.empty()) continue;
                if (line.rfind("# complete", 0) == 0) return;  // finished earlier
                if (line[0] == '#') continue;
                if (!have_header) {
                    have_header = true;
                } else {
                    ++already_done;
                }
            }
        }
    }

    std::ofstream out(config.output, std::ios::app);
    if (!out) throw invalid_parameter("run_sweep: cannot open " + config.output);
    if (!have_header) {
        std::string seed = "1";
        if (const auto* g = config.grid("seed"); g != nullptr && !g->empty()) seed = g->front();
        out << "# experiment=" << config.experiment << " seed=" << seed
            << " tool_version=" << tool_version() << '\n';
        std::string header;
        for (const auto& [k, v] : config.grids) header += k + ',';
        for (std::size_t i = 0; i < metric_names.size(); ++i)
            header += metric_names[i] + (i + 1 < metric_names.size() ? "," : "");
        out << header << '\n';
        out.flush();
    }

    auto point_at = [&](long index) {
        detail::PointParams p;
        long rem = index;
        for (auto it = config.grids.rbegin(); it != config.grids.rend(); ++it) {
            const auto& [key, values] = *it;
            p.values.emplace_back(key, values[static_cast<std::size_t>(rem % static_cast<long>(values.size()))]);
            rem /= static_cast<long>(values.size());
        }
        std::reverse(p.values.begin(), p.values.end());
        return p;
    };
    auto emit = [&](const RunRecord& rec, const detail::PointParams& p) {
        std::string row;
        for (const auto& [k, v] : p.values) row += v + ',';
        for (std::size_t i = 0; i < metric_names.size(); ++i)
            row += format_number(rec.metric(metric_names[i])) + (i + 1 < metric_names.size() ? "," : "");
        out << row << '\n';
        out.flush();
    };

    const int width = std::max(1, config.parallelism);
    for (long start = already_done; start < total; start += width) {
        const long end = std::min(total, start + width);
        std::vector<std::future<RunRecord>> futures;
        std::vector<detail::PointParams> points;
        for (long i = start; i < end; ++i) points.push_back(point_at(i));
        for (long i = start; i < end; ++i)
            futures.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                         run_sweep_point, config.experiment,
                                         points[static_cast<std::size_t>(i - start)]));
        for (long i = start; i < end; ++i)
            emit(futures[static_cast<std::size_t>(i - start)].get(),
                 points[static_cast<std::size_t>(i - start)]);
    }
    out << "# complete\n";
}

}  // namespace synclab
