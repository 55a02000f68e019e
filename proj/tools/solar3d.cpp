#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solar3d/baselines.hpp"
#include "solar3d/config.hpp"
#include "solar3d/geometry.hpp"
#include "solar3d/guards.hpp"
#include "solar3d/search.hpp"
#include "solar3d/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitGuard = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file " + path + " for writing");
    out << content;
}

// JSON config file plus --set section.key=value overrides.
solar3d::RunConfig resolve_config(const std::string& config_path,
                                  const std::vector<std::string>& overrides) {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
        std::istringstream in(read_file(config_path));
        in >> doc;
    }
    for (const std::string& item : overrides) {
        const auto eq = item.find('=');
        const auto dot = item.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw std::runtime_error("bad --set override \"" + item +
                                     "\" (expected section.key=value)");
        }
        const std::string section = item.substr(0, dot);
        const std::string key = item.substr(dot + 1, eq - dot - 1);
        const std::string value = item.substr(eq + 1);
        nlohmann::json parsed;
        if (value == "true" || value == "false") {
            parsed = (value == "true");
        } else {
            try {
                parsed = std::stod(value);
            } catch (const std::exception&) {
                parsed = value;
            }
        }
        doc[section][key] = parsed;
    }
    return solar3d::parse_config(doc);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
    std::map<std::string, double> params;
    for (const std::string& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("bad --param \"" + item + "\" (expected k=v)");
        }
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return params;
}

struct RowResult {
    std::string name;
    bool valid = false;
    std::string rule;
    double peak_w = 0.0;
    double energy_wh = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D photovoltaic daily-energy simulator and geometry search harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int threads = 0;
    app.add_option("--config", config_path, "JSON config file")->expected(1);
    app.add_option("--set", overrides, "override a config value, e.g. --set optics.n2=2.2");
    app.add_option("--threads", threads, "parallel width for simulation");
    // Let global flags appear after the subcommand name too.
    app.fallthrough();

    auto* sim_cmd = app.add_subcommand("simulate", "score a geometry file and print SimResult JSON");
    std::string sim_geometry, sim_out, sim_lightcurve;
    sim_cmd->add_option("geometry", sim_geometry, "geometry text file")->required();
    sim_cmd->add_option("--out", sim_out, "write SimResult JSON here instead of stdout");
    sim_cmd->add_option("--lightcurve", sim_lightcurve, "write the light-curve CSV here");

    auto* val_cmd = app.add_subcommand("validate", "run the guards only; GuardReport JSON to stdout");
    std::string val_geometry;
    val_cmd->add_option("geometry", val_geometry, "geometry text file")->required();

    auto* base_cmd = app.add_subcommand("baseline", "emit a named baseline geometry to stdout");
    std::string base_name;
    std::vector<std::string> base_params;
    base_cmd->add_option("name", base_name, "flat|open-cube|high-table|sawtooth|cavity-fin|tilted-waffle")
        ->required();
    base_cmd->add_option("--param", base_params, "generator parameter k=v");

    auto* obj_cmd = app.add_subcommand("obj", "convert a geometry file to Wavefront OBJ on stdout");
    std::string obj_geometry;
    obj_cmd->add_option("geometry", obj_geometry, "geometry text file")->required();

    auto* search_cmd = app.add_subcommand("search", "budgeted proposer-driven geometry search");
    std::string proposer_spec = "builtin";
    std::size_t budget = 200;
    std::uint64_t seed = 1;
    std::string ledger_path;
    double proposer_timeout = 120.0;
    bool wall_clock = false;
    search_cmd->add_option("--proposer", proposer_spec, "builtin or exec:<command>");
    search_cmd->add_option("--budget", budget, "number of proposals")->check(CLI::PositiveNumber);
    search_cmd->add_option("--seed", seed, "RNG seed");
    search_cmd->add_option("--ledger", ledger_path, "JSONL ledger output path");
    search_cmd->add_option("--timeout", proposer_timeout, "external proposer timeout, seconds");
    search_cmd->add_flag("--wall-clock", wall_clock,
                         "record wall-clock timestamps (breaks ledger reproducibility)");

    auto* cmp_cmd = app.add_subcommand("compare", "simulate several geometries and tabulate them");
    std::vector<std::string> cmp_files;
    bool cmp_json = false;
    cmp_cmd->add_option("geometry", cmp_files, "geometry text files")->required()->expected(-1);
    cmp_cmd->add_flag("--json", cmp_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInternal;
    }

    try {
        solar3d::RunConfig cfg = resolve_config(config_path, overrides);
        if (threads > 0) cfg.sim.threads = threads;

        if (sim_cmd->parsed()) {
            const std::string text = read_file(sim_geometry);
            const solar3d::ScoreResult result = solar3d::score(text, cfg.sim, cfg.guard);
            if (!result.report.all_ok()) {
                std::cerr << solar3d::guard_report_to_json(result.report).dump(2) << "\n";
                return kExitGuard;
            }
            const std::string json = solar3d::sim_result_to_json(result.sim).dump(2) + "\n";
            if (sim_out.empty()) {
                std::cout << json;
            } else {
                write_file(sim_out, json);
            }
            if (!sim_lightcurve.empty()) {
                write_file(sim_lightcurve, solar3d::export_lightcurve(result.sim));
            }
            return kExitOk;
        }

        if (val_cmd->parsed()) {
            solar3d::GuardReport report;
            try {
                const solar3d::Mesh mesh = solar3d::parse_geometry(read_file(val_geometry));
                report = solar3d::run_guards(mesh, cfg.guard);
            } catch (const solar3d::GeometryError& e) {
                report.violations.push_back({"parse", {}, e.what()});
            }
            std::cout << solar3d::guard_report_to_json(report).dump(2) << "\n";
            return report.all_ok() ? kExitOk : kExitGuard;
        }

        if (base_cmd->parsed()) {
            const solar3d::Mesh mesh =
                solar3d::baselines::generate(base_name, parse_params(base_params));
            std::cout << solar3d::serialize_geometry(mesh);
            return kExitOk;
        }

        if (obj_cmd->parsed()) {
            std::cout << solar3d::export_obj(solar3d::parse_geometry(read_file(obj_geometry)));
            return kExitOk;
        }

        if (search_cmd->parsed()) {
            std::unique_ptr<solar3d::search::Proposer> proposer;
            if (proposer_spec == "builtin") {
                proposer = std::make_unique<solar3d::search::BuiltinProposer>(seed);
            } else if (proposer_spec.rfind("exec:", 0) == 0) {
                proposer = std::make_unique<solar3d::search::ExternalProposer>(
                    proposer_spec.substr(5), proposer_timeout);
            } else {
                throw std::runtime_error("unknown proposer \"" + proposer_spec + "\"");
            }
            solar3d::search::Clock clock;
            if (wall_clock) {
                clock = [] {
                    return std::chrono::duration<double>(
                               std::chrono::system_clock::now().time_since_epoch())
                        .count();
                };
            }
            const auto ledger = solar3d::search::run_search(
                *proposer, budget, cfg.sim, cfg.guard, seed, clock,
                [](const solar3d::search::CandidateRecord& r) {
                    std::fprintf(stderr, "candidate %zu score %.3f Wh%s%s\n", r.index, r.score_wh,
                                 r.violation.empty() ? "" : " violation: ",
                                 r.violation.c_str());
                });
            if (!ledger_path.empty()) solar3d::search::save_ledger(ledger, ledger_path);
            std::printf("best candidate %zu, score %.6f Wh\n", ledger.best_index,
                        ledger.best_index == 0
                            ? 0.0
                            : ledger.records[ledger.best_index - 1].score_wh);
            return kExitOk;
        }

        if (cmp_cmd->parsed()) {
            std::vector<RowResult> rows;
            bool any_invalid = false;
            for (const std::string& file : cmp_files) {
                RowResult row;
                row.name = file;
                const solar3d::ScoreResult r = solar3d::score(read_file(file), cfg.sim, cfg.guard);
                row.valid = r.report.all_ok();
                if (!row.valid) {
                    row.rule = r.report.violations.empty() ? "unknown"
                                                           : r.report.violations.front().rule;
                    any_invalid = true;
                } else {
                    row.peak_w = r.sim.peak_w;
                    row.energy_wh = r.sim.energy_wh;
                }
                rows.push_back(row);
            }
            const double ref = rows.empty() || !rows.front().valid ? 0.0 : rows.front().energy_wh;
            if (cmp_json) {
                nlohmann::json out = nlohmann::json::array();
                for (const RowResult& r : rows) {
                    out.push_back({{"file", r.name},
                                   {"valid", r.valid},
                                   {"rule", r.rule},
                                   {"peak_w", r.peak_w},
                                   {"energy_wh", r.energy_wh},
                                   {"ratio", r.valid && ref > 0.0 ? r.energy_wh / ref : 0.0}});
                }
                std::cout << out.dump(2) << "\n";
            } else {
                std::printf("%-40s %12s %14s %8s\n", "geometry", "peak_w", "energy_wh", "ratio");
                for (const RowResult& r : rows) {
                    if (!r.valid) {
                        std::printf("%-40s %12s %14s %8s  [%s]\n", r.name.c_str(), "INVALID",
                                    "INVALID", "-", r.rule.c_str());
                    } else {
                        std::printf("%-40s %12.3f %14.3f %8.4f\n", r.name.c_str(), r.peak_w,
                                    r.energy_wh, ref > 0.0 ? r.energy_wh / ref : 0.0);
                    }
                }
            }
            return any_invalid ? kExitGuard : kExitOk;
        }
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
