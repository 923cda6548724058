// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwalk/io.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qwalk/error.h"

namespace qwalk {

namespace {

using Json = nlohmann::ordered_json;

const char *const kNormalizedName = "normalized-over-outcomes";
const char *const kRawName = "raw-pattern";

[[noreturn]] void invalid(const std::string &msg) {
    throw Error(ErrorCode::ConfigInvalid, msg);
}

void reject_unknown(const Json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if (!obj.is_object()) {
        invalid(where + " must be an object");
    }
    for (const auto &item : obj.items()) {
        if (!allowed.contains(item.key())) {
            invalid("unknown key '" + item.key() + "' in " + where);
        }
    }
}

template <typename T>
void read_into(const Json &obj, const char *key, T &out) {
    if (obj.contains(key)) {
        try {
            out = obj.at(key).get<T>();
        } catch (const nlohmann::json::exception &) {
            invalid(std::string("key '") + key + "' has the wrong type");
        }
    }
}

// Integers must be given as integers, not 2.5 or "2".
void read_int(const Json &obj, const char *key, int &out) {
    if (!obj.contains(key)) {
        return;
    }
    const Json &v = obj.at(key);
    if (!v.is_number_integer()) {
        invalid(std::string("key '") + key + "' must be an integer");
    }
    out = v.get<int>();
}

void read_double(const Json &obj, const char *key, double &out) {
    if (!obj.contains(key)) {
        return;
    }
    const Json &v = obj.at(key);
    if (!v.is_number()) {
        invalid(std::string("key '") + key + "' must be a number");
    }
    out = v.get<double>();
}

std::string pair_source_name(SourceKind kind) {
    return kind == SourceKind::SquashedPair ? "squashed" : "tmsv";
}

SourceKind parse_pair_source(const std::string &name) {
    if (name == "tmsv") {
        return SourceKind::TMSV;
    }
    if (name == "squashed") {
        return SourceKind::SquashedPair;
    }
    invalid("pair_source must be 'tmsv' or 'squashed'");
}

std::string inputs_name(InputModel model) {
    return model == InputModel::IdealPhotons ? "ideal-photons" : "coherent-and-pair";
}

InputModel parse_inputs(const std::string &name) {
    if (name == "coherent-and-pair") {
        return InputModel::CoherentAndPair;
    }
    if (name == "ideal-photons") {
        return InputModel::IdealPhotons;
    }
    invalid("inputs must be 'coherent-and-pair' or 'ideal-photons'");
}

std::string axis_name(HomAxis axis) {
    return axis == HomAxis::MuAlpha ? "mu_alpha" : "overlap";
}

HomAxis parse_axis(const std::string &name) {
    if (name == "overlap") {
        return HomAxis::Overlap;
    }
    if (name == "mu_alpha") {
        return HomAxis::MuAlpha;
    }
    invalid("hom.axis must be 'overlap' or 'mu_alpha'");
}

ExperimentKind parse_kind_config(const std::string &name) {
    try {
        return parse_kind(name);
    } catch (const Error &) {
        invalid("unknown experiment kind '" + name + "'");
    }
}

LayerParams parse_layer(const Json &obj) {
    reject_unknown(obj, {"omega", "gamma", "transmission"}, "layer");
    LayerParams layer;
    read_double(obj, "omega", layer.omega);
    read_double(obj, "gamma", layer.gamma);
    read_double(obj, "transmission", layer.transmission);
    return layer;
}

void parse_experiment(const Json &obj, RunConfig &config) {
    reject_unknown(obj,
                   {"kind", "n_steps", "bin_capacity", "layers", "mu_alpha", "mu_xi", "overlap", "eta_kerr",
                    "eta_idler", "eta_sys", "heralded", "pair_source", "inputs", "evolution_kind", "n_max",
                    "oracle_cutoff", "hom", "fit"},
                   "experiment");
    ExperimentSpec &spec = config.experiment;
    std::string text;
    if (obj.contains("kind")) {
        read_into(obj, "kind", text);
        spec.kind = parse_kind_config(text);
    }
    int n_steps = spec.walk.n_steps;
    read_int(obj, "n_steps", n_steps);
    if (n_steps < 0) {
        invalid("n_steps must be non-negative");
    }
    std::vector<LayerParams> layers;
    if (obj.contains("layers")) {
        const Json &list = obj.at("layers");
        if (!list.is_array()) {
            invalid("layers must be an array");
        }
        for (const auto &item : list) {
            layers.push_back(parse_layer(item));
        }
    }
    if (layers.empty()) {
        layers.assign(static_cast<std::size_t>(n_steps), LayerParams{});
    } else if (layers.size() == 1) {
        layers.assign(static_cast<std::size_t>(n_steps), layers.front());
    } else if (layers.size() != static_cast<std::size_t>(n_steps)) {
        invalid("layers must hold one entry or exactly n_steps entries");
    }
    spec.walk.n_steps = n_steps;
    spec.walk.layers = std::move(layers);
    spec.walk.bin_capacity = n_steps + 1;
    read_int(obj, "bin_capacity", spec.walk.bin_capacity);

    read_double(obj, "mu_alpha", spec.mu_alpha);
    read_double(obj, "mu_xi", spec.mu_xi);
    read_double(obj, "overlap", spec.overlap);
    read_double(obj, "eta_kerr", spec.eta_kerr);
    read_double(obj, "eta_idler", spec.eta_idler);
    read_double(obj, "eta_sys", spec.eta_sys);
    read_into(obj, "heralded", spec.heralded);
    if (obj.contains("pair_source")) {
        read_into(obj, "pair_source", text);
        spec.pair_source = parse_pair_source(text);
    }
    if (obj.contains("inputs")) {
        read_into(obj, "inputs", text);
        spec.inputs = parse_inputs(text);
    }
    if (obj.contains("evolution_kind")) {
        read_into(obj, "evolution_kind", text);
        spec.evolution_kind = parse_kind_config(text);
    }
    config.n_max = n_steps;
    read_int(obj, "n_max", config.n_max);
    read_int(obj, "oracle_cutoff", spec.oracle_cutoff);
    if (obj.contains("hom")) {
        const Json &hom = obj.at("hom");
        reject_unknown(hom, {"axis", "values"}, "experiment.hom");
        if (hom.contains("axis")) {
            read_into(hom, "axis", text);
            config.hom_axis = parse_axis(text);
        }
        read_into(hom, "values", config.hom_values);
    }
    if (obj.contains("fit")) {
        const Json &fit = obj.at("fit");
        reject_unknown(fit, {"target", "tolerance"}, "experiment.fit");
        read_double(fit, "target", config.fit_target);
        read_double(fit, "tolerance", config.fit_tolerance);
    }
}

Json config_json(const RunConfig &config) {
    const ExperimentSpec &spec = config.experiment;
    Json layers = Json::array();
    for (const auto &layer : spec.walk.layers) {
        layers.push_back({{"omega", layer.omega}, {"gamma", layer.gamma}, {"transmission", layer.transmission}});
    }
    Json experiment;
    experiment["kind"] = std::string(kind_name(spec.kind));
    experiment["n_steps"] = spec.walk.n_steps;
    experiment["bin_capacity"] = spec.walk.bin_capacity;
    experiment["layers"] = layers;
    experiment["mu_alpha"] = spec.mu_alpha;
    experiment["mu_xi"] = spec.mu_xi;
    experiment["overlap"] = spec.overlap;
    experiment["eta_kerr"] = spec.eta_kerr;
    experiment["eta_idler"] = spec.eta_idler;
    experiment["eta_sys"] = spec.eta_sys;
    experiment["heralded"] = spec.heralded;
    experiment["pair_source"] = pair_source_name(spec.pair_source);
    experiment["inputs"] = inputs_name(spec.inputs);
    experiment["evolution_kind"] = std::string(kind_name(spec.evolution_kind));
    experiment["n_max"] = config.n_max;
    experiment["oracle_cutoff"] = spec.oracle_cutoff;
    experiment["hom"] = {{"axis", axis_name(config.hom_axis)}, {"values", config.hom_values}};
    experiment["fit"] = {{"target", config.fit_target}, {"tolerance", config.fit_tolerance}};
    Json out;
    out["experiment"] = experiment;
    out["output"] = {{"path", config.output_path}, {"format", std::string(format_name(config.format))}};
    out["oracle_check"] = config.oracle_check;
    return out;
}

std::vector<std::string> label_columns(const Distribution &d) {
    std::size_t width = 0;
    bool rest = false;
    for (const auto &label : d.labels) {
        width = std::max(width, label.bins.size());
        rest = rest || label.remainder;
    }
    std::vector<std::string> cols;
    if (width == 1 && !rest) {
        cols.push_back("m");
        return cols;
    }
    for (std::size_t i = 0; i < width; ++i) {
        cols.push_back("m" + std::to_string(i + 1));
    }
    if (rest) {
        cols.push_back("m" + std::to_string(width + 1));
    }
    return cols;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_number(const std::string &text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception &) {
        invalid("'" + text + "' is not a number");
    }
    if (used != text.size()) {
        invalid("'" + text + "' is not a number");
    }
    return value;
}

int parse_bin(const std::string &text) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception &) {
        invalid("'" + text + "' is not a time bin");
    }
    if (used != text.size() || value < 1) {
        invalid("'" + text + "' is not a time bin");
    }
    return value;
}

Distribution parse_json_distribution(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
        const Json &list = doc.at("distributions");
        if (list.size() != 1) {
            invalid("expected exactly one distribution, found " + std::to_string(list.size()));
        }
        const Json &entry = list.front();
        Distribution d;
        d.steps = entry.at("steps").get<int>();
        d.normalization = entry.at("normalization").get<std::string>() == kRawName
                              ? Normalization::RawPattern
                              : Normalization::NormalizedOverOutcomes;
        d.normalization_defined = entry.at("normalization_defined").get<bool>();
        for (const auto &row : entry.at("outcomes")) {
            OutcomeLabel label;
            label.bins = row.at("bins").get<std::vector<int>>();
            label.remainder = row.at("rest").get<bool>();
            d.labels.push_back(std::move(label));
            d.probs.push_back(row.at("probability").get<double>());
            d.raw.push_back(row.at("raw_pattern_probability").get<double>());
        }
        return d;
    } catch (const nlohmann::json::exception &e) {
        invalid(std::string("malformed distribution file: ") + e.what());
    }
}

Distribution parse_csv_distribution(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    Distribution d;
    std::vector<std::string> header;
    std::set<int> steps;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) {
                continue;
            }
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(std::min(line.size(), colon + 2));
            if (key == "normalization") {
                d.normalization = value == kRawName ? Normalization::RawPattern : Normalization::NormalizedOverOutcomes;
            } else if (key == "normalization_defined") {
                d.normalization_defined = value == "true";
            } else if (key == "steps") {
                d.steps = parse_bin(value) ;
            }
            continue;
        }
        const auto fields = split(line, ',');
        if (header.empty()) {
            header = fields;
            if (header.size() < 3 || header[header.size() - 2] != "probability" ||
                header.back() != "raw_pattern_probability") {
                invalid("unexpected distribution header '" + line + "'");
            }
            continue;
        }
        if (fields.size() != header.size()) {
            invalid("row '" + line + "' does not match the header");
        }
        OutcomeLabel label;
        for (std::size_t i = 0; i + 2 < fields.size(); ++i) {
            if (header[i] == "steps") {
                steps.insert(parse_bin(fields[i]));
            } else if (fields[i] == "rest") {
                label.remainder = true;
            } else {
                label.bins.push_back(parse_bin(fields[i]));
            }
        }
        d.labels.push_back(std::move(label));
        d.probs.push_back(parse_number(fields[fields.size() - 2]));
        d.raw.push_back(parse_number(fields.back()));
    }
    if (header.empty()) {
        invalid("distribution file has no header");
    }
    if (steps.size() > 1) {
        invalid("file holds distributions for several walk lengths; expected one");
    }
    if (steps.size() == 1) {
        d.steps = *steps.begin();
    }
    return d;
}

}  // namespace

std::string_view format_name(OutputFormat format) {
    return format == OutputFormat::Json ? "json" : "csv";
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "json") {
        return OutputFormat::Json;
    }
    invalid("format must be 'csv' or 'json'");
}

RunConfig parse_config(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        invalid(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc, {"experiment", "output", "oracle_check"}, "config");
    RunConfig config;
    config.n_max = config.experiment.walk.n_steps;
    if (doc.contains("experiment")) {
        parse_experiment(doc.at("experiment"), config);
    }
    if (doc.contains("output")) {
        const Json &out = doc.at("output");
        reject_unknown(out, {"path", "format"}, "output");
        read_into(out, "path", config.output_path);
        if (out.contains("format")) {
            std::string format;
            read_into(out, "format", format);
            config.format = parse_format(format);
        }
    }
    read_into(doc, "oracle_check", config.oracle_check);
    try {
        config.experiment.validate();
    } catch (const Error &e) {
        invalid(e.what());
    }
    return config;
}

RunConfig load_config(const std::string &path) {
    return parse_config(read_file(path));
}

std::string config_to_json(const RunConfig &config) {
    return config_json(config).dump();
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string render_distributions(const RunConfig &config, const std::vector<Distribution> &dists) {
    const ExperimentSpec &spec = config.experiment;
    if (config.format == OutputFormat::Json) {
        Json doc;
        doc["config"] = config_json(config);
        doc["kind"] = std::string(kind_name(spec.kind));
        Json list = Json::array();
        for (const auto &d : dists) {
            Json entry;
            entry["steps"] = d.steps;
            entry["normalization"] = d.normalization == Normalization::RawPattern ? kRawName : kNormalizedName;
            entry["normalization_defined"] = d.normalization_defined;
            Json outcomes = Json::array();
            for (std::size_t i = 0; i < d.labels.size(); ++i) {
                outcomes.push_back({{"label", d.labels[i].to_string()},
                                    {"bins", d.labels[i].bins},
                                    {"rest", d.labels[i].remainder},
                                    {"probability", d.probs[i]},
                                    {"raw_pattern_probability", d.raw[i]}});
            }
            entry["outcomes"] = outcomes;
            list.push_back(entry);
        }
        doc["distributions"] = list;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "# qwalk distribution\n";
    out << "# kind: " << kind_name(spec.kind) << "\n";
    out << "# config: " << config_to_json(config) << "\n";
    const bool several = spec.kind == ExperimentKind::StepEvolution;
    if (several) {
        std::string undefined;
        for (const auto &d : dists) {
            if (!d.normalization_defined) {
                undefined += (undefined.empty() ? "" : " ") + std::to_string(d.steps);
            }
        }
        out << "# normalization: " << kNormalizedName << "\n";
        out << "# normalization_undefined_steps: " << undefined << "\n";
    } else if (!dists.empty()) {
        out << "# steps: " << dists.front().steps << "\n";
        out << "# normalization: "
            << (dists.front().normalization == Normalization::RawPattern ? kRawName : kNormalizedName) << "\n";
        out << "# normalization_defined: " << (dists.front().normalization_defined ? "true" : "false") << "\n";
    }
    bool header_done = false;
    for (const auto &d : dists) {
        const auto cols = label_columns(d);
        if (!header_done) {
            if (several) {
                out << "steps,";
            }
            for (const auto &c : cols) {
                out << c << ",";
            }
            out << "probability,raw_pattern_probability\n";
            header_done = true;
        }
        for (std::size_t i = 0; i < d.labels.size(); ++i) {
            if (several) {
                out << d.steps << ",";
            }
            for (int bin : d.labels[i].bins) {
                out << bin << ",";
            }
            if (d.labels[i].remainder) {
                out << "rest,";
            }
            out << format_double(d.probs[i]) << "," << format_double(d.raw[i]) << "\n";
        }
    }
    return out.str();
}

std::string render_hom(const RunConfig &config, const std::vector<HomRow> &rows) {
    const std::string axis = axis_name(config.hom_axis);
    if (config.format == OutputFormat::Json) {
        Json doc;
        doc["config"] = config_json(config);
        doc["kind"] = "hom";
        Json list = Json::array();
        for (const auto &row : rows) {
            list.push_back({{axis, row.value}, {"visibility", row.visibility}});
        }
        doc["points"] = list;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "# qwalk hom\n";
    out << "# config: " << config_to_json(config) << "\n";
    out << axis << ",visibility\n";
    for (const auto &row : rows) {
        out << format_double(row.value) << "," << format_double(row.visibility) << "\n";
    }
    return out.str();
}

std::string render_fit(const RunConfig &config, const OverlapFit &fit) {
    if (config.format == OutputFormat::Json) {
        Json doc;
        doc["config"] = config_json(config);
        doc["kind"] = "fit-overlap";
        doc["overlap"] = fit.overlap;
        doc["mu_alpha"] = fit.mu_alpha;
        doc["visibility"] = fit.visibility;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "# qwalk fit-overlap\n";
    out << "# config: " << config_to_json(config) << "\n";
    out << "overlap,mu_alpha,visibility\n";
    out << format_double(fit.overlap) << "," << format_double(fit.mu_alpha) << "," << format_double(fit.visibility)
        << "\n";
    return out.str();
}

Distribution parse_distribution(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        return parse_json_distribution(text);
    }
    return parse_csv_distribution(text);
}

Distribution read_distribution(const std::string &path) {
    return parse_distribution(read_file(path));
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoError, "failed reading '" + path + "'");
    }
    return buf.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
    }
}

}  // namespace qwalk
