#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synclab/model.hpp"

namespace synclab {

using json = nlohmann::json;

// Observation schema: {n, L, lambda, seed, provenance, channels}, one entry
// per channel, each a row-major list of [re, im] pairs.
inline json observation_to_json(const MultiFreqObservation& obs) {
    json j;
    j["n"] = obs.params.n;
    j["L"] = obs.params.L;
    j["lambda"] = obs.params.lambda;
    j["seed"] = obs.params.seed;
    j["provenance"] = to_string(obs.provenance);
    json channels = json::array();
    for (const HermitianMatrix& m : obs.channels) {
        json entries = json::array();
        for (int r = 0; r < m.dim(); ++r)
            for (int c = 0; c < m.dim(); ++c)
                entries.push_back({m(r, c).real(), m(r, c).imag()});
        channels.push_back(std::move(entries));
    }
    j["channels"] = std::move(channels);
    return j;
}

inline MultiFreqObservation observation_from_json(const json& j) {
    MultiFreqObservation obs;
    obs.params.n = j.at("n").get<int>();
    obs.params.L = j.at("L").get<int>();
    obs.params.lambda = j.at("lambda").get<double>();
    obs.params.seed = j.at("seed").get<std::uint64_t>();
    obs.params.validate();
    const std::string prov = j.at("provenance").get<std::string>();
    if (prov == "planted")
        obs.provenance = Provenance::planted;
    else if (prov == "null")
        obs.provenance = Provenance::null_model;
    else
        throw invalid_parameter("observation_from_json: unknown provenance '" + prov + "'");
    const json& channels = j.at("channels");
    if (static_cast<int>(channels.size()) != obs.params.L)
        throw invalid_parameter("observation_from_json: channel count does not match L");
    const int n = obs.params.n;
    for (const json& entries : channels) {
        if (static_cast<int>(entries.size()) != n * n)
            throw invalid_parameter("observation_from_json: channel entry count does not match n*n");
        CMatrix m(n, n);
        int idx = 0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c, ++idx)
                m(r, c) = Complex(entries[static_cast<std::size_t>(idx)][0].get<double>(),
                                  entries[static_cast<std::size_t>(idx)][1].get<double>());
        obs.channels.push_back(HermitianMatrix(std::move(m)));
    }
    return obs;
}

inline void write_observation(const MultiFreqObservation& obs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_parameter("write_observation: cannot open " + path);
    out << observation_to_json(obs).dump(1) << '\n';
}

inline MultiFreqObservation read_observation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("read_observation: cannot open " + path);
    json j;
    in >> j;
    return observation_from_json(j);
}

// Minimal CSV table: '#' lines are provenance comments, first non-comment
// line is the header.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            table.columns = split_csv_line(line);
            have_header = true;
        } else {
            table.rows.push_back(split_csv_line(line));
        }
    }
    return table;
}

}  // namespace synclab
