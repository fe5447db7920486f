// arsim: approach-flow simulator comparing the conventional missed approach
// with gap-reinjection, over the Malaga RWY13 procedure by default.
//
// Subcommands:
//   run        single scenario -> summary.json (+ trace.csv, plan.json)
//   sweep      (T_s, distance) grid -> sweep.csv + figure data files
//   validate   check a scenario or chart file, exit 0/1
//   dump-chart print the built-in chart as a chart file

#include "arsim/chart.hpp"
#include "arsim/engine.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw arsim::chart::ValidationError("scenario", "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write-to-temp, rename-on-success: no partial outputs on failure.
void write_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

// Apply a dotted-path override ("engine.T_s=120") to a JSON document.
void apply_override(json& doc, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw arsim::chart::ValidationError("--set", "expected key=value, got '" + kv + "'");
    const std::string path = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty())
            throw arsim::chart::ValidationError("--set", "empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            json value;
            try {
                value = json::parse(raw);
            } catch (const json::parse_error&) {
                value = raw; // plain string
            }
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

json load_scenario_doc(const std::string& scenario_path,
                       const std::vector<std::string>& overrides) {
    json doc;
    try {
        doc = json::parse(read_file(scenario_path));
    } catch (const json::parse_error& e) {
        throw arsim::chart::ValidationError("<scenario>", e.what());
    }
    for (const auto& kv : overrides)
        apply_override(doc, kv);
    return doc;
}

arsim::engine::ScenarioConfig config_from_doc(const json& doc, const std::string& scenario_path) {
    return arsim::engine::load_scenario(doc.dump(),
                                        fs::path(scenario_path).parent_path().string());
}

std::string figure_grid_csv(const std::vector<arsim::engine::SweepCell>& cells, bool fuel) {
    std::ostringstream out;
    out << "T_s_s,distance_to_gap," << (fuel ? "fuel_saving" : "time_saving") << '\n';
    for (const auto& c : cells)
        out << fmt(c.spacing_s) << ',' << c.distance_to_gap << ','
            << (c.failed ? "nan" : fmt(fuel ? c.fuel_saving : c.time_saving)) << '\n';
    return out.str();
}

// Missed-aircraft series of both procedures, aligned at the go-around tick.
std::string instantaneous_csv(const arsim::engine::RunReport& conv,
                              const arsim::engine::RunReport& ars, const std::string& missed_id) {
    const auto series = [&](const arsim::engine::RunReport& r) {
        std::vector<const arsim::engine::TraceRow*> rows;
        for (const auto& row : r.trace)
            if (row.aircraft_id == missed_id && row.t_s >= r.goaround_time_s)
                rows.push_back(&row);
        return rows;
    };
    const auto c = series(conv);
    const auto a = series(ars);
    std::ostringstream out;
    out << "t_rel_s,conv_z_m,conv_hdot_ms,conv_V_ms,conv_F_kgmin,conv_Fa_kg,"
           "ars_z_m,ars_hdot_ms,ars_V_ms,ars_F_kgmin,ars_Fa_kg\n";
    const std::size_t n = std::max(c.size(), a.size());
    for (std::size_t i = 0; i < n; ++i) {
        out << i;
        const auto emit = [&](const std::vector<const arsim::engine::TraceRow*>& rows,
                              double fa0) {
            if (i < rows.size())
                out << ',' << fmt(rows[i]->z_m) << ',' << fmt(rows[i]->hdot_ms) << ','
                    << fmt(rows[i]->v_ms) << ',' << fmt(rows[i]->flow_kgmin) << ','
                    << fmt(rows[i]->aggregated_kg - fa0);
            else
                out << ",,,,,";
        };
        emit(c, c.empty() ? 0.0 : c.front()->aggregated_kg);
        emit(a, a.empty() ? 0.0 : a.front()->aggregated_kg);
        out << '\n';
    }
    return out.str();
}

int run_command(const std::string& scenario_path, const std::string& out_dir, bool trace,
                bool dump_plan, const std::vector<std::string>& overrides) {
    const json doc = load_scenario_doc(scenario_path, overrides);
    auto cfg = config_from_doc(doc, scenario_path);
    cfg.record_trace = true;
    const auto report = arsim::engine::run(cfg);

    write_atomic(fs::path(out_dir) / "summary.json",
                 arsim::engine::report_to_json(report, cfg));
    if (trace)
        write_atomic(fs::path(out_dir) / "trace.csv",
                     arsim::engine::trace_to_csv(report.trace));
    if (dump_plan && report.plan)
        write_atomic(fs::path(out_dir) / "plan.json", arsim::ars::plan_to_json(*report.plan));
    std::cout << "run: procedure=" << arsim::engine::to_string(report.procedure)
              << " outcome=" << arsim::engine::to_string(report.outcome)
              << " maneuver_time_s=" << fmt(report.maneuver_time_s)
              << " maneuver_fuel_kg=" << fmt(report.maneuver_fuel_kg) << '\n';
    return report.outcome == arsim::engine::Outcome::Timeout ? 2 : 0;
}

int sweep_command(const std::string& scenario_path, const std::string& out_dir, int jobs,
                  const std::vector<std::string>& overrides) {
    const json doc = load_scenario_doc(scenario_path, overrides);
    const auto base = config_from_doc(doc, scenario_path);

    std::vector<double> spacings{60, 90, 120, 150, 180};
    std::vector<int> distances{1, 2, 3, 4, 5, 6, 7, 8};
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        if (s.contains("spacings"))
            spacings = s.at("spacings").get<std::vector<double>>();
        if (s.contains("distances"))
            distances = s.at("distances").get<std::vector<int>>();
    }

    const auto cells = arsim::engine::sweep(base, spacings, distances, jobs);
    write_atomic(fs::path(out_dir) / "sweep.csv", arsim::engine::sweep_to_csv(cells));
    write_atomic(fs::path(out_dir) / "fig_time_savings.csv", figure_grid_csv(cells, false));
    write_atomic(fs::path(out_dir) / "fig_fuel_savings.csv", figure_grid_csv(cells, true));

    // Instantaneous comparison series at T_s=90 s, 4 aircraft to the gap.
    {
        auto cfg = base;
        cfg.spacing_s = 90.0;
        cfg.distance_to_gap = 4;
        cfg.record_trace = true;
        cfg.procedure = arsim::engine::Procedure::Conventional;
        const auto conv = arsim::engine::run(cfg);
        cfg.procedure = arsim::engine::Procedure::Ars;
        const auto ars_run = arsim::engine::run(cfg);
        const std::string missed_id = "AC" + std::to_string(cfg.lead_aircraft);
        write_atomic(fs::path(out_dir) / "fig_instantaneous.csv",
                     instantaneous_csv(conv, ars_run, missed_id));
    }

    int failed = 0;
    for (const auto& c : cells)
        failed += c.failed ? 1 : 0;
    std::cout << "sweep: " << cells.size() << " cells, " << failed << " failed\n";
    return failed == 0 ? 0 : 2;
}

int validate_command(const std::string& scenario_path, const std::string& chart_path,
                     const std::vector<std::string>& overrides) {
    if (!chart_path.empty()) {
        arsim::chart::load_chart(read_file(chart_path));
        std::cout << "chart ok\n";
    }
    if (!scenario_path.empty()) {
        const json doc = load_scenario_doc(scenario_path, overrides);
        config_from_doc(doc, scenario_path);
        std::cout << "scenario ok\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approach-flow simulator: conventional vs gap-reinjection missed approaches"};
    app.require_subcommand(1);

    std::string scenario_path, chart_path, out_dir = "out";
    bool trace = false, dump_plan = false;
    int jobs = 1;
    std::vector<std::string> overrides;

    auto* cmd_run = app.add_subcommand("run", "simulate one scenario");
    cmd_run->add_option("--scenario", scenario_path)->required();
    cmd_run->add_option("--out", out_dir);
    cmd_run->add_flag("--trace", trace);
    cmd_run->add_flag("--dump-plan", dump_plan);
    cmd_run->add_option("--set", overrides);

    auto* cmd_sweep = app.add_subcommand("sweep", "paired runs over the (T_s, distance) grid");
    cmd_sweep->add_option("--scenario", scenario_path)->required();
    cmd_sweep->add_option("--out", out_dir);
    cmd_sweep->add_option("--jobs", jobs);
    cmd_sweep->add_option("--set", overrides);

    auto* cmd_validate = app.add_subcommand("validate", "check a scenario and/or chart file");
    cmd_validate->add_option("--scenario", scenario_path);
    cmd_validate->add_option("--chart", chart_path);
    cmd_validate->add_option("--set", overrides);

    auto* cmd_dump = app.add_subcommand("dump-chart", "print the built-in chart");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed())
            return run_command(scenario_path, out_dir, trace, dump_plan, overrides);
        if (cmd_sweep->parsed())
            return sweep_command(scenario_path, out_dir, jobs, overrides);
        if (cmd_validate->parsed()) {
            if (scenario_path.empty() && chart_path.empty())
                throw arsim::chart::ValidationError("validate",
                                                    "need --scenario and/or --chart");
            return validate_command(scenario_path, chart_path, overrides);
        }
        if (cmd_dump->parsed()) {
            std::cout << arsim::chart::save_chart(arsim::chart::builtin_malaga_rwy13());
            return 0;
        }
    } catch (const arsim::chart::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
