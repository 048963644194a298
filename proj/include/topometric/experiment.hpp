#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "topometric/config.hpp"
#include "topometric/errors.hpp"
#include "topometric/fusion.hpp"
#include "topometric/io.hpp"
#include "topometric/metrics.hpp"
#include "topometric/simulator.hpp"

namespace topometric {

/// One experiment: where the scenario comes from, how to fuse it and how to
/// score it. Exactly one of `generate` / `bundle` is set.
struct ExperimentSpec {
    std::optional<ScenarioParams> generate;
    std::optional<std::filesystem::path> bundle;
    FusionConfig fusion;
    std::vector<double> sub_lengths = default_sub_lengths();
    std::optional<std::filesystem::path> output_dir;
    std::uint64_t seed = 1;
};

inline constexpr std::string_view kScenarioKeys[] = {
    "length",     "step",         "d_th",          "trans_bias",           "trans_sigma",           "rot_bias",
    "rot_sigma",  "detect_radius", "false_rate",   "true_confidence_mean", "false_confidence_mean", "confidence_sigma",
    "seed"};

inline constexpr std::string_view kOtherSpecKeys[] = {"kind", "bundle", "fusion_config", "sub_lengths", "out"};

/// Keys that `sweep` may vary.
inline bool is_sweepable_key(std::string_view key) {
    const auto in = [&](const auto& keys) { return std::find(std::begin(keys), std::end(keys), key) != std::end(keys); };
    return in(kFusionKeys) || in(kScenarioKeys);
}

namespace detail {

inline std::uint64_t non_negative_seed(long v) {
    if (v < 0) {
        throw ConfigError("seed must be non-negative");
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace detail

/// Reads an experiment from flat key/value pairs. Relative paths resolve
/// against `base_dir`. Fusion keys may be given inline; they override the
/// file named by `fusion_config`.
inline ExperimentSpec parse_experiment(const KeyValues& kv, const std::filesystem::path& base_dir = {}) {
    const auto known = [](const std::string& key) {
        return is_sweepable_key(key) ||
               std::find(std::begin(kOtherSpecKeys), std::end(kOtherSpecKeys), key) != std::end(kOtherSpecKeys);
    };
    for (const auto& [key, value] : kv.entries()) {
        if (!known(key)) {
            throw ConfigError("unknown experiment key '" + key + "'");
        }
    }
    const auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };

    ExperimentSpec spec;
    spec.seed = detail::non_negative_seed(kv.get_long("seed", 1));

    if (kv.has("bundle") == kv.has("kind")) {
        throw ConfigError("exactly one scenario source required: 'bundle' or 'kind'");
    }
    if (kv.has("bundle")) {
        spec.bundle = resolve(kv.get_string("bundle", ""));
        for (const auto& key : kScenarioKeys) {
            if (key != "seed" && kv.has(std::string(key))) {
                throw ConfigError("key '" + std::string(key) + "' only applies to generated scenarios");
            }
        }
    } else {
        ScenarioParams p = short_loop_preset();
        try {
            p.kind = parse_path_kind(kv.get_string("kind", ""));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        p.length = kv.get_double("length", p.length);
        p.step = kv.get_double("step", p.step);
        p.d_th = kv.get_double("d_th", p.d_th);
        p.seed = spec.seed;
        p.odometry.trans_bias = kv.get_double("trans_bias", p.odometry.trans_bias);
        p.odometry.trans_sigma = kv.get_double("trans_sigma", p.odometry.trans_sigma);
        p.odometry.rot_bias = kv.get_double("rot_bias", p.odometry.rot_bias);
        p.odometry.rot_sigma = kv.get_double("rot_sigma", p.odometry.rot_sigma);
        p.detector.detect_radius = kv.get_double("detect_radius", p.detector.detect_radius);
        p.detector.false_rate = kv.get_double("false_rate", p.detector.false_rate);
        p.detector.true_confidence_mean = kv.get_double("true_confidence_mean", p.detector.true_confidence_mean);
        if (kv.has("false_confidence_mean")) {
            p.detector.false_confidence_mean = kv.get_double("false_confidence_mean", 0.0);
        }
        p.detector.confidence_sigma = kv.get_double("confidence_sigma", p.detector.confidence_sigma);
        if (!(p.step > 0.0) || !(p.length > p.step) || !(p.d_th > 0.0)) {
            throw ConfigError("need length > step > 0 and d_th > 0");
        }
        try {
            p.odometry.validate();
            p.detector.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        spec.generate = p;
    }

    FusionConfig fusion;
    if (kv.has("fusion_config")) {
        fusion = load_fusion_config(resolve(kv.get_string("fusion_config", "")));
    }
    spec.fusion = fusion_config_from(kv, fusion);

    spec.sub_lengths = kv.get_list("sub_lengths", default_sub_lengths());
    if (spec.sub_lengths.empty() ||
        std::any_of(spec.sub_lengths.begin(), spec.sub_lengths.end(), [](double L) { return !(L > 0.0); })) {
        throw ConfigError("sub_lengths must be positive");
    }
    if (kv.has("out")) {
        spec.output_dir = resolve(kv.get_string("out", ""));
    }
    return spec;
}

inline ExperimentSpec load_experiment(const std::filesystem::path& path) {
    return parse_experiment(KeyValues::load(path), path.parent_path());
}

// --- scenario bundles -----------------------------------------------------

inline void write_bundle(const Scenario& sc, const std::filesystem::path& dir) {
    io::ensure_directory(dir);
    io::write_file(dir / "truth.txt", io::format_trajectory(sc.ground_truth));
    io::write_file(dir / "map.txt", io::format_map(sc.map));
    io::write_file(dir / "motions.txt", io::format_motions(sc.motions));
    io::write_file(dir / "detections.txt", io::format_detections(sc.detections));
}

inline Scenario read_bundle(const std::filesystem::path& dir) {
    Scenario sc;
    sc.ground_truth = io::parse_trajectory(io::read_file(dir / "truth.txt"), "truth.txt");
    sc.map = io::parse_map(io::read_file(dir / "map.txt"), "map.txt");
    sc.motions = io::parse_motions(io::read_file(dir / "motions.txt"), "motions.txt");
    sc.detections = io::parse_detections(io::read_file(dir / "detections.txt"), "detections.txt");
    if (sc.motions.size() + 1 != sc.ground_truth.size()) {
        throw ScenarioError("bundle: motions.txt must hold one motion per truth pose after the first");
    }
    for (std::size_t i = 0; i < sc.ground_truth.size(); ++i) {
        if (sc.ground_truth.timestep(i) != static_cast<long>(i)) {
            throw ScenarioError("bundle: truth.txt timesteps must be 0, 1, 2, ...");
        }
    }
    return sc;
}

// --- reports --------------------------------------------------------------

inline std::string report_csv(const ErrorReport& r) {
    std::string out = "sub_length,trans_pct,rot_deg_per_m\n";
    for (const auto& le : r.per_length) {
        out += io::format_number(le.sub_length) + ',' + io::format_number(le.trans_pct) + ',' +
               io::format_number(le.rot_deg_per_m) + '\n';
    }
    out += "summary," + io::format_number(r.avg_translation_pct) + ',' + io::format_number(r.avg_rotation_deg_per_m) +
           '\n';
    return out;
}

inline nlohmann::json report_json(const ErrorReport& r) {
    nlohmann::json j;
    j["avg_translation_pct"] = r.avg_translation_pct;
    j["avg_rotation_deg_per_m"] = r.avg_rotation_deg_per_m;
    j["endpoint_error"] = r.endpoint_error;
    j["per_length"] = nlohmann::json::array();
    for (const auto& le : r.per_length) {
        j["per_length"].push_back({{"sub_length", le.sub_length},
                                   {"trans_pct", le.trans_pct},
                                   {"rot_deg_per_m", le.rot_deg_per_m},
                                   {"windows", le.windows}});
    }
    j["skipped_sub_lengths"] = r.skipped_sub_lengths;
    return j;
}

/// metric / topometric, or the strings "inf" (topometric error is zero) and
/// "undefined" (both are zero).
inline nlohmann::json improvement_ratio(double metric, double topometric) {
    if (topometric > 0.0) {
        return metric / topometric;
    }
    return metric > 0.0 ? nlohmann::json("inf") : nlohmann::json("undefined");
}

struct ExperimentResult {
    Scenario scenario;
    Trajectory metric;
    Trajectory topometric;
    ErrorReport metric_report;
    ErrorReport topometric_report;
};

/// Runs integration-only and topometric pipelines on one scenario and scores
/// both. No files are touched.
inline ExperimentResult evaluate_experiment(const ExperimentSpec& spec) {
    ExperimentResult res;
    if (spec.bundle) {
        res.scenario = read_bundle(*spec.bundle);
    } else {
        try {
            res.scenario = make_scenario(*spec.generate);
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(e.what());
        }
    }
    const Scenario& sc = res.scenario;
    if (sc.ground_truth.size() < 3) {
        throw ScenarioError("scenario needs at least 3 poses");
    }
    const Pose2 origin = sc.ground_truth.origin();
    try {
        res.metric = integrate(origin, sc.motions);
        res.topometric = fuse(sc.motions, sc.detections, sc.map, origin, spec.fusion);
        res.metric_report = evaluate(res.metric, sc.ground_truth, spec.sub_lengths);
        res.topometric_report = evaluate(res.topometric, sc.ground_truth, spec.sub_lengths);
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::logic_error& e) {
        throw ScenarioError(e.what());
    } catch (const std::runtime_error& e) {
        throw ScenarioError(e.what());
    }
    return res;
}

/// Runs the experiment and writes its artifacts into `out_dir`.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
    ExperimentResult res = evaluate_experiment(spec);
    io::ensure_directory(out_dir);
    io::write_file(out_dir / "truth.txt", io::format_trajectory(res.scenario.ground_truth));
    io::write_file(out_dir / "estimate_metric.txt", io::format_trajectory(res.metric));
    io::write_file(out_dir / "estimate_topometric.txt", io::format_trajectory(res.topometric));
    io::write_file(out_dir / "report_metric.csv", report_csv(res.metric_report));
    io::write_file(out_dir / "report_metric.json", report_json(res.metric_report).dump(2) + '\n');
    io::write_file(out_dir / "report_topometric.csv", report_csv(res.topometric_report));
    io::write_file(out_dir / "report_topometric.json", report_json(res.topometric_report).dump(2) + '\n');

    nlohmann::json imp;
    imp["translation_ratio"] =
        improvement_ratio(res.metric_report.avg_translation_pct, res.topometric_report.avg_translation_pct);
    imp["rotation_ratio"] =
        improvement_ratio(res.metric_report.avg_rotation_deg_per_m, res.topometric_report.avg_rotation_deg_per_m);
    imp["metric"] = {{"trans_pct", res.metric_report.avg_translation_pct},
                     {"rot_deg_per_m", res.metric_report.avg_rotation_deg_per_m}};
    imp["topometric"] = {{"trans_pct", res.topometric_report.avg_translation_pct},
                         {"rot_deg_per_m", res.topometric_report.avg_rotation_deg_per_m}};
    io::write_file(out_dir / "improvement.json", imp.dump(2) + '\n');
    return res;
}

struct SweepRow {
    std::string value;
    double trans_pct = 0.0;
    double rot_deg_per_m = 0.0;
};

/// One experiment per value of `param`, each in its own subdirectory
/// `<param>_<value>`, summarised in `sweep.csv` (topometric errors).
inline std::vector<SweepRow> sweep(const KeyValues& base, const std::filesystem::path& base_dir, const std::string& param,
                                   std::span<const std::string> values, const std::filesystem::path& out_dir) {
    if (!is_sweepable_key(param)) {
        throw ConfigError("cannot sweep unknown parameter '" + param + "'");
    }
    if (values.empty()) {
        throw ConfigError("sweep needs at least one value");
    }
    std::vector<SweepRow> rows;
    for (const auto& value : values) {
        KeyValues kv = base;
        kv.set(param, value);
        const ExperimentSpec spec = parse_experiment(kv, base_dir);
        const ExperimentResult res = run_experiment(spec, out_dir / (param + "_" + value));
        rows.push_back({value, res.topometric_report.avg_translation_pct, res.topometric_report.avg_rotation_deg_per_m});
    }
    std::string csv = "value,trans_pct,rot_deg_per_m\n";
    for (const auto& r : rows) {
        csv += r.value + ',' + io::format_number(r.trans_pct) + ',' + io::format_number(r.rot_deg_per_m) + '\n';
    }
    io::write_file(out_dir / "sweep.csv", csv);
    return rows;
}

}  // namespace topometric
