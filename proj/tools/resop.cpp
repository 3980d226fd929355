// resop: minimum reservoir rule curves under inflow uncertainty.
//
// Subcommands: synth (synthetic discharge data), rulecurve (compute a
// curve), analyze (support scenarios, confidence matching, comparisons).
// Exit codes: 0 success, 1 usage or I/O error, 2 model infeasible.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "resop/analysis.hpp"
#include "resop/config.hpp"
#include "resop/io.hpp"
#include "resop/mpc.hpp"
#include "resop/parallel.hpp"
#include "resop/synth.hpp"

namespace fs = std::filesystem;
using namespace resop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

// Run parameters shared by rulecurve and analyze; a config file provides
// defaults, explicitly passed flags win.
struct RunArgs {
    std::string config_path;
    std::string data;
    std::string reservoir;
    std::string grid = "weekly";
    int start_month = 1;
    std::string model = "stochastic";
    std::string gen = "merge";
    int k = 0;  // 0: per-mode default
    double level = 0.95;
    bool mpc = true;
    int window_years = 2;
    int scenario_years = 0;  // 0: follow k
    std::string out = "out";
    int jobs = 0;  // 0: hardware parallelism
    std::vector<double> levels = {0.95, 0.965, 0.975, 0.98, 0.985, 0.99};
    std::string current_curve;
    std::string curve_json;
};

void add_common_options(CLI::App* cmd, RunArgs& args) {
    cmd->add_option("--config", args.config_path, "key = value run configuration file");
    cmd->add_option("--data", args.data, "discharge CSV (river,date,discharge_m3s)");
    cmd->add_option("--reservoir", args.reservoir, "reservoir constants file");
    cmd->add_option("--grid", args.grid, "time grid: daily, weekly or monthly")
        ->check(CLI::IsMember({"daily", "weekly", "monthly"}));
    cmd->add_option("--start-month", args.start_month, "first month of the year (10 = hydrological)")
        ->check(CLI::Range(1, 12));
    cmd->add_option("--gen", args.gen, "scenario generation: merge or mix")
        ->check(CLI::IsMember({"merge", "mix"}));
    cmd->add_option("-k,--years-per-scenario", args.k,
                    "years per scenario (default: 2 direct, 3 with --mpc)");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--jobs", args.jobs, "worker threads (0 = all cores, 1 = sequential)");
}

// Fill every option the user did not pass explicitly from the config file.
void merge_config(const CLI::App* cmd, RunArgs& args) {
    if (args.config_path.empty()) return;
    const KeyValueFile kv = read_key_value_file(args.config_path);
    auto absent = [&](const std::string& flag) {
        const CLI::Option* option = cmd->get_option_no_throw(flag);
        return option == nullptr || option->count() == 0;
    };
    if (absent("--data")) args.data = kv.get_string("data", args.data);
    if (absent("--reservoir")) args.reservoir = kv.get_string("reservoir", args.reservoir);
    if (absent("--grid")) args.grid = kv.get_string("grid", args.grid);
    if (absent("--start-month"))
        args.start_month = static_cast<int>(kv.get_long("start_month", args.start_month));
    if (absent("--model")) args.model = kv.get_string("model", args.model);
    if (absent("--gen")) args.gen = kv.get_string("gen", args.gen);
    if (absent("-k")) args.k = static_cast<int>(kv.get_long("k", args.k));
    if (absent("--level")) args.level = kv.get_double("level", args.level);
    if (absent("--mpc")) args.mpc = kv.get_bool("mpc", args.mpc);
    if (absent("--window-years"))
        args.window_years = static_cast<int>(kv.get_long("window_years", args.window_years));
    if (absent("--scenario-years"))
        args.scenario_years = static_cast<int>(kv.get_long("scenario_years", args.scenario_years));
    if (absent("--out")) args.out = kv.get_string("out", args.out);
    if (absent("--jobs")) args.jobs = static_cast<int>(kv.get_long("jobs", args.jobs));
    if (absent("--levels") && kv.has("levels")) args.levels = kv.get_double_list("levels");
    if (absent("--current")) args.current_curve = kv.get_string("current", args.current_curve);
}

struct LoadedInputs {
    TimeGrid grid = TimeGrid::weekly();
    ReservoirSpec spec;
    std::vector<HydroYear> years;
    std::string fingerprint;
};

LoadedInputs load_inputs(const RunArgs& args) {
    if (args.data.empty()) throw std::invalid_argument("--data is required");
    if (args.reservoir.empty()) throw std::invalid_argument("--reservoir is required");
    LoadedInputs in;
    in.grid = TimeGrid::from_name(args.grid, args.start_month);
    in.spec = convert_spec_units(read_reservoir_file(args.reservoir), in.grid);
    LoadOptions load_options;
    load_options.diagnostics = &std::cerr;
    in.years = load_discharge_csv(args.data, in.grid, load_options);
    in.fingerprint = "data:" + fingerprint_file(args.data) +
                     ",reservoir:" + fingerprint_file(args.reservoir);
    return in;
}

int effective_jobs(int jobs) { return jobs <= 0 ? default_jobs() : jobs; }

std::size_t scenario_count(std::size_t n, const ScenarioGenMethod& method) {
    if (method.kind == GenKind::Merging)
        return n - static_cast<std::size_t>(method.years_per_scenario) + 1;
    std::size_t count = 1;
    for (int i = 0; i < method.years_per_scenario; ++i) count *= n;
    return count;
}

int cmd_rulecurve(RunArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const LoadedInputs in = load_inputs(args);
    fs::create_directories(args.out);
    std::ofstream log(fs::path(args.out) / "run.log");
    auto note = [&](const std::string& line) {
        log << line << '\n';
        std::cout << line << '\n';
    };

    const int jobs = effective_jobs(args.jobs);
    const int k = args.k > 0 ? args.k : (args.mpc ? 3 : 2);
    MpcConfig config;
    config.window_years = args.window_years;
    config.scenario_years = args.scenario_years > 0 ? args.scenario_years : k;
    std::size_t scenarios = 1;
    if (args.model == "stochastic") {
        const ScenarioGenMethod method{args.gen == "merge" ? GenKind::Merging : GenKind::Mixing, k};
        config.model = StochasticModelChoice{method};
        scenarios = scenario_count(in.years.size(), method);
    } else if (args.model == "robust") {
        config.model = RobustModelChoice{{args.level, false}};
    } else {
        throw std::invalid_argument("unknown model '" + args.model + "'");
    }

    note("command: rulecurve");
    note("model: " + describe(config.model) + (args.mpc ? "-mpc" : ""));
    note("grid: " + in.grid.name());
    note("years: " + std::to_string(in.years.size()));
    note("scenarios: " + std::to_string(scenarios));
    note("jobs: " + std::to_string(jobs));
    note("inputs: " + in.fingerprint);

    if (const auto* robust = std::get_if<RobustModelChoice>(&config.model)) {
        // Export the bound being optimized against so it can be inspected
        // or replayed through the normal ingestion path, feasible or not.
        const WorstCaseScenario wc =
            worst_case_scenario(in.years, in.grid, robust->conf,
                                args.mpc ? config.scenario_years : config.window_years);
        std::ofstream wc_csv(fs::path(args.out) / "worst_case.csv", std::ios::binary);
        write_scenario_csv(wc.underlying, wc_csv);
        note("wrote: " + (fs::path(args.out) / "worst_case.csv").string());
    }

    RuleCurve curve;
    try {
        if (args.mpc) {
            curve = run_mpc(in.spec, in.years, config, {}, jobs, [&](const WindowReport& r) {
                char line[96];
                std::snprintf(line, sizeof(line), "window=%d scenarios=%zu time_s=%.3f",
                              r.start_step, r.scenario_count, r.elapsed_seconds);
                log << line << '\n';
                std::cout << line << '\n' << std::flush;
            });
        } else {
            curve = solve_direct(in.spec, in.years, config, {}, jobs);
        }
    } catch (const InfeasibleModelError& e) {
        note(std::string("infeasible: ") + e.what());
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    }

    curve.generated_at = now_iso8601();
    curve.input_fingerprint = in.fingerprint;
    curve.validate();

    std::ofstream csv(fs::path(args.out) / "rulecurve.csv", std::ios::binary);
    write_rule_curve_csv(curve, csv);
    write_rule_curve_json(curve, (fs::path(args.out) / "rulecurve.json").string());

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    char line[64];
    std::snprintf(line, sizeof(line), "total_time_s: %.3f", elapsed.count());
    note(line);
    note("wrote: " + (fs::path(args.out) / "rulecurve.csv").string());
    return kExitOk;
}

int cmd_analyze(RunArgs& args) {
    const LoadedInputs in = load_inputs(args);
    fs::create_directories(args.out);
    const int jobs = effective_jobs(args.jobs);
    const int k = args.k > 0 ? args.k : 2;

    // Stochastic envelope over k-year scenarios, support statistics.
    const ScenarioGenMethod method{args.gen == "merge" ? GenKind::Merging : GenKind::Mixing, k};
    const ScenarioSet set(in.years, method, in.grid);
    std::cout << "scenarios: " << set.size() << '\n';
    const EnvelopeResult envelope = solve_decoupled(in.spec, set, {}, jobs);
    if (envelope.status != LpStatus::Optimal) {
        std::cerr << "error: stochastic model infeasible for scenarios:";
        for (const auto& label : envelope.infeasible_labels) std::cerr << ' ' << label;
        std::cerr << '\n';
        return kExitInfeasible;
    }

    const SupportReport report = support_statistics(envelope.envelope, set);
    {
        std::ofstream csv(fs::path(args.out) / "support_report.csv", std::ios::binary);
        write_support_csv(report, csv);
        std::ofstream table(fs::path(args.out) / "support_report.txt", std::ios::binary);
        write_support_table(report, table);
        write_support_table(report, std::cout);
    }

    // The stochastic rule curve: recomputed first year, or a prior artifact.
    RuleCurve stochastic_curve;
    if (!args.curve_json.empty()) {
        stochastic_curve = read_rule_curve_json(args.curve_json);
        if (!(stochastic_curve.grid == in.grid))
            throw std::invalid_argument("grid mismatch: curve '" + args.curve_json +
                                        "' is on grid " + stochastic_curve.grid.name());
    } else {
        stochastic_curve.grid = in.grid;
        stochastic_curve.values = envelope.envelope.rule_storage.head(in.grid.steps_per_year());
        stochastic_curve.min_storage = in.spec.min_storage;
        stochastic_curve.max_storage = in.spec.max_storage;
        stochastic_curve.model =
            std::string("stochastic-") + to_string(method.kind) + "-k" + std::to_string(k);
    }

    // Robust curves across the candidate levels; infeasible levels are
    // reported and skipped.
    std::map<double, RuleCurve> robust_curves;
    for (const double level : args.levels) {
        const RobustResult r = solve_robust(in.spec, in.years, {level, false}, args.window_years);
        if (r.status != LpStatus::Optimal) {
            std::cout << "robust model infeasible at confidence level " << level << '\n';
            continue;
        }
        RuleCurve curve;
        curve.grid = in.grid;
        curve.values = r.trajectory.storages.head(in.grid.steps_per_year());
        curve.min_storage = in.spec.min_storage;
        curve.max_storage = in.spec.max_storage;
        char label[32];
        std::snprintf(label, sizeof(label), "robust-%g", level);
        curve.model = label;
        robust_curves.emplace(level, std::move(curve));
    }

    nlohmann::json match;
    match["schema_version"] = 1;
    if (!robust_curves.empty()) {
        const double matched = match_confidence_level(stochastic_curve, robust_curves);
        match["matched_level"] = matched;
        nlohmann::json distances;
        for (const auto& [level, curve] : robust_curves) {
            char key[16];
            std::snprintf(key, sizeof(key), "%g", level);
            distances[key] = curve_distance(stochastic_curve, curve);
        }
        match["l1_distance_m3"] = distances;
        std::cout << "closest confidence level: " << matched << '\n';
    } else {
        match["matched_level"] = nullptr;
        std::cout << "no feasible robust curve; confidence matching skipped\n";
    }
    {
        std::ofstream out(fs::path(args.out) / "confidence_match.json", std::ios::binary);
        out << match.dump(2) << '\n';
    }

    std::map<std::string, RuleCurve> curves;
    curves[stochastic_curve.model] = stochastic_curve;
    for (const auto& [level, curve] : robust_curves) curves[curve.model] = curve;
    if (!args.current_curve.empty())
        curves["current"] = read_rule_curve_csv(args.current_curve, in.grid);

    const CurveComparison cmp = compare_curves(curves);
    {
        std::ofstream csv(fs::path(args.out) / "curve_compare.csv", std::ios::binary);
        write_comparison_csv(cmp, csv);
        std::ofstream txt(fs::path(args.out) / "curve_compare.txt", std::ios::binary);
        write_comparison_summary(cmp, txt);
    }
    std::cout << "wrote: " << (fs::path(args.out) / "support_report.csv").string() << '\n';
    return kExitOk;
}

int cmd_synth(const std::string& out_path, const std::string& preset, std::uint64_t seed, int years,
              int first_year, const std::vector<std::string>& rivers) {
    SynthOptions options = SynthOptions::preset(preset);
    options.seed = seed;
    options.years = years;
    options.first_year = first_year;
    if (!rivers.empty()) {
        if (rivers.size() != options.rivers.size())
            throw std::invalid_argument("expected " + std::to_string(options.rivers.size()) +
                                        " river names");
        options.rivers = rivers;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
    write_synthetic_csv(out, options);
    std::cout << "wrote: " << out_path << " (" << years << " years, seed " << seed << ", preset "
              << preset << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum reservoir rule curves under inflow uncertainty"};
    app.require_subcommand(1);

    RunArgs rule_args;
    CLI::App* rulecurve = app.add_subcommand("rulecurve", "compute a minimum rule curve");
    add_common_options(rulecurve, rule_args);
    rulecurve->add_option("--model", rule_args.model, "uncertainty model: stochastic or robust")
        ->check(CLI::IsMember({"stochastic", "robust"}));
    rulecurve->add_option("--level", rule_args.level, "confidence level for the robust model");
    rulecurve->add_flag("--mpc,!--no-mpc", rule_args.mpc, "receding-horizon driver (default on)");
    rulecurve->add_option("--window-years", rule_args.window_years, "guarantee horizon in years");
    rulecurve->add_option("--scenario-years", rule_args.scenario_years,
                          "scenario length for the receding horizon (default: k)");

    RunArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "support scenarios and curve comparisons");
    add_common_options(analyze, analyze_args);
    analyze->add_option("--levels", analyze_args.levels, "candidate confidence levels for matching")
        ->delimiter(',');
    analyze->add_option("--current", analyze_args.current_curve,
                        "existing rule curve CSV to compare against");
    analyze->add_option("--curve", analyze_args.curve_json,
                        "prior rulecurve.json to analyze instead of recomputing");
    analyze->add_option("--window-years", analyze_args.window_years,
                        "horizon for the robust curves");

    std::string synth_out = "discharge.csv", synth_preset = "default";
    std::uint64_t synth_seed = 1;
    int synth_years = 23, synth_first_year = 1992;
    std::vector<std::string> synth_rivers;
    CLI::App* synth = app.add_subcommand("synth", "generate synthetic discharge data");
    synth->add_option("--out", synth_out, "output CSV path");
    synth->add_option("--preset", synth_preset, "default, generous or marginal")
        ->check(CLI::IsMember({"default", "generous", "marginal"}));
    synth->add_option("--seed", synth_seed, "random seed");
    synth->add_option("--years", synth_years, "number of calendar years");
    synth->add_option("--first-year", synth_first_year, "first calendar year");
    synth->add_option("--rivers", synth_rivers, "river names (three, comma separated)")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (rulecurve->parsed()) {
            merge_config(rulecurve, rule_args);
            return cmd_rulecurve(rule_args);
        }
        if (analyze->parsed()) {
            merge_config(analyze, analyze_args);
            return cmd_analyze(analyze_args);
        }
        if (synth->parsed())
            return cmd_synth(synth_out, synth_preset, synth_seed, synth_years, synth_first_year,
                             synth_rivers);
    } catch (const InfeasibleModelError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
