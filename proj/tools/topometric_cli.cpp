// Command-line driver for topometric localization experiments.
//
//   topometric run   --spec <file> --out <dir>
//   topometric sweep --spec <file> --param <key> --values <v1,v2,...> --out <dir>
//   topometric gen   --kind loop --length 262 --step 1 --seed N --out <dir> [--spec <file>]

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "topometric/topometric.hpp"

namespace fs = std::filesystem;
using namespace topometric;

namespace {

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const auto item = KeyValues::trim(std::string_view(csv).substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int report_error(int code, std::string_view kind, const std::string& message, const std::optional<fs::path>& out) {
    nlohmann::json rec;
    rec["error"] = {{"exit_code", code}, {"kind", kind}, {"message", message}};
    const std::string text = rec.dump() + '\n';
    std::cerr << text;
    if (out) {
        // Best effort: the output directory may be the thing that failed.
        try {
            io::ensure_directory(*out);
            io::write_file(*out / "error.json", text);
        } catch (const IoError&) {
        }
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topometric localization: odometry drift correction from topological node detections"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run metric-only and topometric pipelines on one scenario");
    run->add_option("--spec", spec_path, "Experiment spec (key = value)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();

    std::string param;
    std::string values;
    auto* sw = app.add_subcommand("sweep", "Repeat an experiment over values of one parameter");
    sw->add_option("--spec", spec_path, "Experiment spec (key = value)")->required();
    sw->add_option("--param", param, "Parameter key to vary")->required();
    sw->add_option("--values", values, "Comma-separated values")->required();
    sw->add_option("--out", out_dir, "Output directory")->required();

    std::string kind = "loop";
    double length = 262.0;
    double step = 1.0;
    long seed = 1;
    auto* gen = app.add_subcommand("gen", "Generate a scenario bundle");
    gen->add_option("--kind", kind, "loop | figure-eight | random-walk");
    gen->add_option("--length", length, "Path length [m]");
    gen->add_option("--step", step, "Distance between poses [m]");
    gen->add_option("--seed", seed, "Scenario seed");
    gen->add_option("--spec", spec_path, "Optional spec supplying noise and detector parameters");
    gen->add_option("--out", out_dir, "Bundle directory")->required();

    CLI11_PARSE(app, argc, argv);

    const std::optional<fs::path> out = out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir);
    try {
        if (run->parsed()) {
            const ExperimentSpec spec = load_experiment(spec_path);
            const ExperimentResult res = run_experiment(spec, *out);
            std::cout << "metric      trans " << res.metric_report.avg_translation_pct << " %  rot "
                      << res.metric_report.avg_rotation_deg_per_m << " deg/m\n"
                      << "topometric  trans " << res.topometric_report.avg_translation_pct << " %  rot "
                      << res.topometric_report.avg_rotation_deg_per_m << " deg/m\n";
        } else if (sw->parsed()) {
            const KeyValues base = KeyValues::load(spec_path);
            const auto rows = sweep(base, fs::path(spec_path).parent_path(), param, split_values(values), *out);
            for (const auto& r : rows) {
                std::cout << param << '=' << r.value << "  trans " << r.trans_pct << " %  rot " << r.rot_deg_per_m
                          << " deg/m\n";
            }
        } else if (gen->parsed()) {
            KeyValues kv;
            if (!spec_path.empty()) {
                kv = KeyValues::load(spec_path);
                kv.erase("bundle");
            }
            kv.set("kind", kind);
            kv.set("length", io::format_number(length));
            kv.set("step", io::format_number(step));
            kv.set("seed", std::to_string(seed));
            const ExperimentSpec spec = parse_experiment(kv, fs::path(spec_path).parent_path());
            Scenario sc;
            try {
                sc = make_scenario(*spec.generate);
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(e.what());
            }
            write_bundle(sc, *out);
            std::cout << "wrote " << sc.ground_truth.size() << " poses, " << sc.map.size() << " nodes, "
                      << sc.detections.size() << " detections to " << out->string() << '\n';
        }
    } catch (const ConfigError& e) {
        return report_error(kExitConfig, "config", e.what(), out);
    } catch (const ScenarioError& e) {
        return report_error(kExitScenario, "scenario", e.what(), out);
    } catch (const IoError& e) {
        return report_error(kExitIo, "io", e.what(), out);
    } catch (const std::exception& e) {
        return report_error(kExitScenario, "scenario", e.what(), out);
    }
    return kExitOk;
}
