// Command-line front end: simulation, estimation, advantage computation,
// interpolation, toy identities, the splitting reduction, thresholds,
// sweeps, and SVG figures.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "synclab/synclab.hpp"

namespace {

using namespace synclab;

void print_advantage(const AdvantageEstimate& est, const std::string& out_path) {
    std::string text = "# seed=" + std::to_string(est.params.seed) +
                       " tool_version=" + tool_version() + "\n" + advantage_csv_header() + "\n" +
                       to_csv_row(est) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw invalid_parameter("cannot open " + out_path);
        out << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale experiments for multi-frequency angular synchronization"};
    app.require_subcommand(1);

    ModelParams params;
    long samples = 20000;
    int D = 6;

    // simulate
    auto* simulate = app.add_subcommand("simulate", "sample an observation and write it as JSON");
    std::string out_path;
    bool null_model = false;
    simulate->add_option("--n", params.n, "dimension")->required();
    simulate->add_option("--L", params.L, "number of frequency channels")->required();
    simulate->add_option("--lambda", params.lambda, "signal-to-noise ratio")->required();
    simulate->add_option("--seed", params.seed, "master seed")->required();
    simulate->add_flag("--null", null_model, "sample the null model instead of the planted one");
    simulate->add_option("--out", out_path, "output JSON path")->required();

    // pca
    auto* pca = app.add_subcommand("pca", "top eigenpair and overlap for one channel");
    std::string in_path;
    int channel = 1;
    double tol = 1e-8;
    long max_iter = 10000;
    pca->add_option("--in", in_path, "observation JSON path")->required();
    pca->add_option("--channel", channel, "channel index (1-based)");
    pca->add_option("--tol", tol, "power-iteration tolerance");
    pca->add_option("--max-iter", max_iter, "power-iteration cap");

    // advantage
    auto* advantage = app.add_subcommand("advantage", "low-degree advantage by one of the routes");
    std::string method = "mc";
    bool median_of_means = false;
    advantage->add_option("method", method,
                          "mc | two_replica | relaxed | quadrature | surrogate | surrogate_full");
    advantage->add_option("--n", params.n, "dimension")->required();
    advantage->add_option("--L", params.L, "number of frequency channels")->required();
    advantage->add_option("--lambda", params.lambda, "signal-to-noise ratio")->required();
    advantage->add_option("--D", D, "degree cutoff")->required();
    advantage->add_option("--samples", samples, "Monte Carlo sample count");
    advantage->add_option("--seed", params.seed, "master seed");
    advantage->add_flag("--median-of-means", median_of_means, "median-of-means aggregation");
    advantage->add_option("--out", out_path, "CSV output path (default stdout)");

    // interpolate
    auto* interpolate = app.add_subcommand("interpolate", "Lindeberg path F_t over a t grid");
    int grid_points = 5;
    interpolate->add_option("--n", params.n, "dimension")->required();
    interpolate->add_option("--L", params.L, "number of frequency channels")->required();
    interpolate->add_option("--lambda", params.lambda, "signal-to-noise ratio")->required();
    interpolate->add_option("--D", D, "degree cutoff")->required();
    interpolate->add_option("--samples", samples, "trials (common random numbers)");
    interpolate->add_option("--seed", params.seed, "master seed");
    interpolate->add_option("--grid-points", grid_points, "number of evenly spaced t values");
    interpolate->add_option("--out", out_path, "CSV output path (default stdout)");

    // toy
    auto* toy = app.add_subcommand("toy", "exact advantage identities on small problems");
    std::string kind = "angular";
    int M = 0;
    double toy_lambda = 0.5;
    int toy_D = 2;
    toy->add_option("--kind", kind, "angular | gaussian");
    toy->add_option("--lambda", toy_lambda, "signal strength / mean shift");
    toy->add_option("--D", toy_D, "degree cutoff");
    toy->add_option("--M", M, "hidden-sample block count (0: skip composition)");

    // reduction
    auto* reduction = app.add_subcommand("reduction", "noise-splitting one-sided test rates");
    double kappa = 1.0, c = 0.5;
    long trials = 200;
    std::string estimator_name = "oracle_signal";
    int hidden_M = 0;
    reduction->add_option("--n", params.n, "dimension")->required();
    reduction->add_option("--L", params.L, "number of frequency channels")->required();
    reduction->add_option("--lambda", params.lambda, "A-channel SNR lambda_a")->required();
    reduction->add_option("--kappa", kappa, "split ratio");
    reduction->add_option("--c", c, "weak-recovery constant");
    reduction->add_option("--trials", trials, "trial count");
    reduction->add_option("--estimator", estimator_name, "oracle_signal | pca_channel1");
    reduction->add_option("--seed", params.seed, "master seed");
    reduction->add_option("--M", hidden_M, "hidden-sample block count (0: plain ROC)");

    // thresholds
    auto* thresholds = app.add_subcommand("thresholds", "statistical thresholds for a given L");
    int threshold_L = 2;
    thresholds->add_option("--L", threshold_L, "number of frequency channels")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid from a config file");
    std::string config_path;
    sweep->add_option("--config", config_path, "TOML-style sweep config")->required();

    // plot
    auto* plot = app.add_subcommand("plot", "render a CSV as a self-contained SVG");
    PlotSpec plot_spec;
    std::string csv_path, svg_path;
    plot->add_option("--csv", csv_path, "input CSV path")->required();
    plot->add_option("--x", plot_spec.x, "x column")->required();
    plot->add_option("--y", plot_spec.y, "y column")->required();
    plot->add_option("--series", plot_spec.series, "series column (one polyline per value)");
    plot->add_flag("--log-y", plot_spec.log_y, "log10 scale on y");
    plot->add_option("--out", svg_path, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            MultiFreqObservation obs =
                null_model ? sample_null(params, params.seed) : sample_planted(params, params.seed).second;
            write_observation(obs, out_path);
        } else if (pca->parsed()) {
            const MultiFreqObservation obs = read_observation(in_path);
            const EigenPair top =
                top_eigenpair(obs.channels.at(static_cast<std::size_t>(channel - 1)), tol, max_iter);
            std::cout << "top_eigenvalue=" << format_number(top.value)
                      << " over_sqrt_n=" << format_number(top.value / std::sqrt(obs.params.n))
                      << " residual=" << format_number(top.residual) << '\n';
            if (obs.provenance == Provenance::planted) {
                const PhaseSignal x = sample_phases(
                    obs.params.n, rng::Stream(obs.params.seed, rng::Purpose::signal));
                const HermitianMatrix x_hat(top.vector * top.vector.adjoint());
                std::cout << "overlap=" << format_number(overlap_score(x_hat, x).value) << '\n';
            }
        } else if (advantage->parsed()) {
            const McEstimator agg =
                median_of_means ? McEstimator::median_of_means : McEstimator::mean;
            AdvantageEstimate est;
            if (method == "mc")
                est = advantage_mc(params, D, samples, agg);
            else if (method == "two_replica")
                est = advantage_two_replica_mc(params, D, samples, agg);
            else if (method == "relaxed")
                est = advantage_relaxed_mc(params, D, samples, agg);
            else if (method == "quadrature")
                est = advantage_quadrature(params, D);
            else if (method == "surrogate")
                est = gaussian_surrogate(params, D, SurrogateMode::truncated);
            else if (method == "surrogate_full")
                est = gaussian_surrogate(params, D, SurrogateMode::full);
            else
                throw invalid_parameter("unknown advantage method '" + method + "'");
            print_advantage(est, out_path);
        } else if (interpolate->parsed()) {
            if (grid_points < 2) throw invalid_parameter("need at least 2 grid points");
            std::vector<int> t_grid;
            for (int g = 0; g < grid_points; ++g)
                t_grid.push_back(static_cast<int>(
                    std::lround(static_cast<double>(g) * params.n / (grid_points - 1))));
            const std::vector<InterpolationPoint> path =
                interpolation_path(params, D, t_grid, samples);
            std::string text = "# seed=" + std::to_string(params.seed) +
                               " tool_version=" + tool_version() + "\nt,f_t,stderr\n";
            for (const InterpolationPoint& p : path)
                text += std::to_string(p.t) + ',' + format_number(p.f_t) + ',' +
                        format_number(p.stderr_) + '\n';
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_path);
                if (!out) throw invalid_parameter("cannot open " + out_path);
                out << text;
            }
        } else if (toy->parsed()) {
            const ToyKind toy_kind = (kind == "gaussian") ? ToyKind::gaussian_mean_shift
                                                          : ToyKind::angular_n2_L1;
            const ToyProblem problem = build_toy_problem(toy_kind, toy_lambda, toy_D);
            const GramBasis basis = gram_basis(problem, toy_D);
            std::cout << "problem=" << problem.description() << '\n'
                      << "adv_squared_basis=" << format_number(advantage_via_basis(problem, basis))
                      << '\n'
                      << "adv_squared_solve="
                      << format_number(advantage_via_linear_solve(problem, toy_D)) << '\n';
            if (M >= 2)
                std::cout << "hidden_sample_adv_squared(M=" << M
                          << ")=" << format_number(hidden_sample_advantage(problem, M, toy_D))
                          << '\n';
        } else if (reduction->parsed()) {
            if (!kappa_constraint_ok(params.lambda, kappa))
                std::cerr << "warning: lambda/(1+kappa^2) >= 1; the split leaves a supercritical "
                             "A channel\n";
            const ReductionEstimator estimator = (estimator_name == "pca_channel1")
                                                     ? ReductionEstimator::pca_channel1
                                                     : ReductionEstimator::oracle_signal;
            if (hidden_M >= 2) {
                const RunRecord rec =
                    hidden_sample_detection(params, hidden_M, trials, kappa, c, estimator);
                std::cout << "null_fire_rate=" << format_number(rec.metric("null_fire_rate"))
                          << " alt_fire_rate=" << format_number(rec.metric("alt_fire_rate"))
                          << " per_sample_fp=" << format_number(rec.metric("per_sample_fp"))
                          << " union_bound=" << format_number(rec.metric("union_bound")) << '\n';
            } else {
                const std::vector<RunRecord> rates =
                    roc_experiment(params, kappa, c, trials, estimator);
                for (const RunRecord& rec : rates)
                    std::cout << rec.experiment << " accept_rate="
                              << format_number(rec.metric("accept_rate")) << " wilson=["
                              << format_number(rec.metric("accept_lo")) << ", "
                              << format_number(rec.metric("accept_hi")) << "]\n";
            }
        } else if (thresholds->parsed()) {
            const Thresholds th = statistical_thresholds(threshold_L);
            std::cout << "L=" << threshold_L << " lower=" << format_number(th.lower)
                      << (th.lower_is_cited ? " (cited, not formulaic)" : "")
                      << " upper=" << format_number(th.upper) << '\n';
        } else if (sweep->parsed()) {
            run_sweep(parse_sweep_config(config_path));
        } else if (plot->parsed()) {
            emit_plot(csv_path, plot_spec, svg_path);
        }
    } catch (const invalid_parameter& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const budget_exceeded& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
