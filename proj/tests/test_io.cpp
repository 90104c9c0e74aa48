#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "synclab/io.hpp"
#include "synclab/records.hpp"
#include "synclab/svg_plot.hpp"
#include "synclab/sweep.hpp"

using namespace synclab;

namespace {

std::string temp_path(const std::string& name) { return "synclab_test_" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out);
    out << text;
}

}  // namespace

TEST_CASE("observation JSON round trip is exact and deterministic") {
    ModelParams params{6, 2, 1.1, 42};
    const MultiFreqObservation obs = sample_planted(params, 42).second;
    const json j = observation_to_json(obs);
    const MultiFreqObservation back = observation_from_json(j);
    CHECK(back.params.n == 6);
    CHECK(back.params.L == 2);
    CHECK(back.params.lambda == 1.1);
    CHECK(back.params.seed == 42);
    CHECK(back.provenance == Provenance::planted);
    for (int l = 0; l < 2; ++l)
        CHECK((back.channels[static_cast<std::size_t>(l)].mat() -
               obs.channels[static_cast<std::size_t>(l)].mat())
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    CHECK(j.dump() == observation_to_json(sample_planted(params, 42).second).dump());
}

TEST_CASE("observation JSON validates its schema") {
    ModelParams params{3, 1, 0.0, 1};
    json j = observation_to_json(sample_null(params, 1));
    json bad = j;
    bad["provenance"] = "mystery";
    CHECK_THROWS_AS(observation_from_json(bad), invalid_parameter);
    bad = j;
    bad["channels"].push_back(bad["channels"][0]);
    CHECK_THROWS_AS(observation_from_json(bad), invalid_parameter);
    bad = j;
    bad["channels"][0].erase(0);
    CHECK_THROWS_AS(observation_from_json(bad), invalid_parameter);
}

TEST_CASE("advantage CSV rows carry all fields at full precision") {
    AdvantageEstimate est;
    est.method = AdvMethod::quadrature;
    est.params = {2, 1, 0.9, 0};
    est.D = 3;
    est.samples = 4096;
    est.adv_squared = 2.302075;
    est.stderr_ = 0.0;
    CHECK(advantage_csv_header() == "method,n,L,lambda,D,samples,adv_squared,stderr");
    CHECK(to_csv_row(est) == "quadrature,2,1,0.90000000000000002,3,4096,2.3020749999999999,0");
}

TEST_CASE("wilson intervals bracket the empirical rate") {
    const WilsonInterval w = wilson_interval(90, 100);
    CHECK(w.rate == doctest::Approx(0.9));
    CHECK(w.lo < 0.9);
    CHECK(w.hi > 0.9);
    CHECK(w.lo > 0.8);
    CHECK(w.hi < 0.97);
    const WilsonInterval zero = wilson_interval(0, 50);
    CHECK(zero.rate == 0.0);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi > 0.0);
    CHECK_THROWS_AS(wilson_interval(0, 0), invalid_parameter);
}

TEST_CASE("read_csv splits comments, header, and rows") {
    const std::string path = temp_path("table.csv");
    spit(path, "# provenance line\na,b,c\n1,2,3\n4,5,6\n");
    const CsvTable table = read_csv(path);
    CHECK(table.comments.size() == 1);
    REQUIRE(table.columns.size() == 3);
    CHECK(table.column_index("b") == 1);
    CHECK(table.column_index("missing") == -1);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1][2] == "6");
    std::remove(path.c_str());
}

TEST_CASE("sweep config parsing handles scalars, arrays, and comments") {
    const std::string path = temp_path("sweep.toml");
    spit(path,
         "experiment = \"pca\"   # the experiment\n"
         "output = \"out.csv\"\n"
         "parallelism = 2\n"
         "n = 30\n"
         "L = [1, 2, 3]\n"
         "lambda = [0.5, 1.5]\n"
         "trials = 4\n"
         "seed = 9\n");
    const SweepConfig config = parse_sweep_config(path);
    CHECK(config.experiment == "pca");
    CHECK(config.output == "out.csv");
    CHECK(config.point_count() == 6);
    REQUIRE(config.grid("L") != nullptr);
    CHECK(config.grid("L")->size() == 3);
    CHECK((*config.grid("lambda"))[1] == "1.5");
    std::remove(path.c_str());
}

TEST_CASE("SYNCLAB_THREADS overrides the configured parallelism") {
    const std::string path = temp_path("threads.toml");
    spit(path, "experiment = \"pca\"\noutput = \"o.csv\"\nparallelism = 7\nn = 10\n");
    setenv("SYNCLAB_THREADS", "3", 1);
    CHECK(parse_sweep_config(path).parallelism == 3);
    unsetenv("SYNCLAB_THREADS");
    CHECK(parse_sweep_config(path).parallelism == 7);
    std::remove(path.c_str());
}

TEST_CASE("a 3x3 pca sweep emits exactly 9 rows, deterministically and resumably") {
    const std::string out = temp_path("sweep_out.csv");
    std::remove(out.c_str());
    SweepConfig config;
    config.experiment = "pca";
    config.output = out;
    config.grids = {{"n", {"24"}},
                    {"L", {"1", "2", "3"}},
                    {"lambda", {"0.5", "1.0", "2.0"}},
                    {"trials", {"3"}},
                    {"seed", {"5"}}};
    run_sweep(config);
    const CsvTable table = read_csv(out);
    REQUIRE(table.rows.size() == 9);
    CHECK(table.columns.front() == "n");
    CHECK(table.column_index("overlap_mean") >= 0);
    CHECK(slurp(out).find("# complete") != std::string::npos);

    // a second run on the finished file changes nothing
    const std::string before = slurp(out);
    run_sweep(config);
    CHECK(slurp(out) == before);

    // determinism: a fresh run reproduces every byte of the data rows
    const std::string out2 = temp_path("sweep_out2.csv");
    std::remove(out2.c_str());
    SweepConfig config2 = config;
    config2.output = out2;
    run_sweep(config2);
    CsvTable table2 = read_csv(out2);
    REQUIRE(table2.rows.size() == 9);
    for (std::size_t r = 0; r < 9; ++r) CHECK(table2.rows[r] == table.rows[r]);

    // resumption: truncate to the header plus 4 rows, rerun, no duplicates
    {
        std::istringstream in(before);
        std::string line, truncated;
        int data_rows = 0;
        while (std::getline(in, line)) {
            if (line.rfind("# complete", 0) == 0) break;
            const bool is_data = !line.empty() && line[0] != '#' && line.find("overlap_mean") == std::string::npos;
            if (is_data && ++data_rows > 4) break;
            truncated += line + '\n';
        }
        spit(out, truncated);
    }
    run_sweep(config);
    const CsvTable resumed = read_csv(out);
    REQUIRE(resumed.rows.size() == 9);
    for (std::size_t r = 0; r < 9; ++r) CHECK(resumed.rows[r] == table.rows[r]);

    std::remove(out.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("sweeps refuse oversized grids before starting") {
    SweepConfig config;
    config.experiment = "pca";
    config.output = temp_path("never.csv");
    config.budget = 3;
    config.grids = {{"n", {"10", "20"}}, {"L", {"1", "2"}}};
    CHECK_THROWS_AS(run_sweep(config), budget_exceeded);
    CHECK(!std::ifstream(config.output));
}

TEST_CASE("emit_plot renders one polyline per series with error bars") {
    const std::string csv = temp_path("plot.csv");
    const std::string svg = temp_path("plot.svg");
    spit(csv,
         "lambda,L,overlap_mean,overlap_mean_stderr\n"
         "0.5,1,0.1,0.02\n1.0,1,0.3,0.02\n1.5,1,0.5,0.02\n"
         "0.5,2,0.05,0.02\n1.0,2,0.2,0.02\n1.5,2,0.4,0.02\n"
         "0.5,3,0.02,0.02\n1.0,3,0.1,0.02\n1.5,3,0.35,0.02\n");
    PlotSpec spec;
    spec.x = "lambda";
    spec.y = "overlap_mean";
    spec.series = "L";
    emit_plot(csv, spec, svg);
    const std::string content = slurp(svg);
    std::size_t polylines = 0, pos = 0;
    while ((pos = content.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        ++pos;
    }
    CHECK(polylines == 3);
    CHECK(content.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(content.find("lambda") != std::string::npos);
    std::remove(csv.c_str());
    std::remove(svg.c_str());
}

TEST_CASE("emit_plot errors name the missing column and reject empty data") {
    const std::string csv = temp_path("plot2.csv");
    const std::string svg = temp_path("plot2.svg");
    spit(csv, "x,y\n1,2\n");
    PlotSpec spec;
    spec.x = "x";
    spec.y = "nope";
    CHECK_THROWS_WITH_AS(emit_plot(csv, spec, svg), doctest::Contains("nope"), invalid_parameter);

    spit(csv, "x,y\n");
    spec.y = "y";
    CHECK_THROWS_AS(emit_plot(csv, spec, svg), invalid_parameter);
    CHECK(!std::ifstream(svg));

    spit(csv, "x,y\n1,-2\n");
    spec.log_y = true;
    CHECK_THROWS_AS(emit_plot(csv, spec, svg), domain_error);
    std::remove(csv.c_str());
}
