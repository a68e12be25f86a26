// Command-line front end: generate, validate, train, run, report.
//
// Exit codes: 0 success, 2 validation failure, 3 infeasible instance,
// 1 anything else.

#include "drm/error.hpp"
#include "drm/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace drm;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::format:
        case ErrorKind::config:
        case ErrorKind::parameter:
        case ErrorKind::shape:
        case ErrorKind::io:
        case ErrorKind::dataset_too_small:
        case ErrorKind::temporal_consistency:
            return kExitValidation;
        case ErrorKind::feasibility:
        case ErrorKind::infeasible_problem:
            return kExitInfeasible;
        default:
            return 1;
    }
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::format, path.string() + ": " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out << text;
}

std::vector<Date> select_days(const std::vector<Date>& manifest_days, const std::string& spec) {
    if (spec.empty()) return manifest_days;
    if (spec.find_first_not_of("0123456789") == std::string::npos) {
        const auto n = std::stoul(spec);
        if (n == 0 || n > manifest_days.size())
            throw Error(ErrorKind::config, "--days " + spec + " outside 1.." + std::to_string(manifest_days.size()));
        return {manifest_days.begin(), manifest_days.begin() + static_cast<std::ptrdiff_t>(n)};
    }
    std::vector<Date> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto comma = spec.find(',', pos);
        const auto field = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto d = parse_date(field);
        if (!d) throw Error(ErrorKind::config, "--days: invalid date '" + field + "'");
        out.push_back(*d);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

objective::ObjectiveMode parse_mode(const std::string& m) {
    if (m == "offline") return objective::ObjectiveMode::offline;
    if (m == "online") return objective::ObjectiveMode::online;
    throw Error(ErrorKind::config, "--mode must be offline or online");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Household demand-response simulator"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic fleet bundle");
    harness::SyntheticRecipe recipe;
    std::string gen_out, recipe_file, gen_start, gen_mode = "offline";
    gen->add_option("--out", gen_out, "Bundle directory")->required();
    gen->add_option("--recipe", recipe_file, "Recipe JSON; flags below override its fields");
    gen->add_option("--households", recipe.households, "Number of households");
    gen->add_option("--seed", recipe.seed, "Generator seed");
    gen->add_option("--history-days", recipe.history_days, "Days of history before the simulated span");
    gen->add_option("--days", recipe.simulated_days, "Simulated days after the history");
    gen->add_option("--daily-energy", recipe.daily_energy_kwh, "Mean daily consumption target (kWh)");
    gen->add_option("--pv-share", recipe.pv_share, "Fraction of households with PV");
    gen->add_option("--start", gen_start, "First history date (YYYY-MM-DD)");
    gen->add_option("--mode", gen_mode, "Simulation mode written to the manifest")->check(CLI::IsMember({"offline", "online"}));

    // validate
    auto* val = app.add_subcommand("validate", "Lint a bundle");
    std::string val_bundle;
    val->add_option("--bundle", val_bundle, "Bundle directory")->required();

    // train
    auto* train = app.add_subcommand("train", "Train forecasters and peak regressions per household");
    std::string train_bundle, train_out;
    std::optional<std::uint64_t> train_seed;
    train->add_option("--bundle", train_bundle, "Bundle directory")->required();
    train->add_option("--out", train_out, "Model directory")->required();
    train->add_option("--seed", train_seed, "Override the bundle seed");

    // run
    auto* run = app.add_subcommand("run", "Simulate the fleet and write results plus a report");
    std::string run_bundle, run_out, run_mode, run_days, run_models;
    std::optional<std::uint64_t> run_seed;
    int run_threads = -1;
    run->add_option("--bundle", run_bundle, "Bundle directory")->required();
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_option("--mode", run_mode, "offline or online (default: manifest)");
    run->add_option("--seed", run_seed, "Override the bundle seed");
    run->add_option("--days", run_days, "First N manifest days, or comma-separated dates");
    run->add_option("--models", run_models, "Directory written by 'train'");
    run->add_option("--threads", run_threads, "Worker threads (0: all cores)");

    // report
    auto* rep = app.add_subcommand("report", "Compute metrics from a results file");
    std::string rep_results, rep_out;
    rep->add_option("--results", rep_results, "results.json written by 'run'")->required();
    rep->add_option("--out", rep_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*gen) {
            harness::SyntheticRecipe r = recipe_file.empty() ? harness::SyntheticRecipe{}
                                                             : harness::recipe_from_json(read_json(recipe_file));
            if (gen->count("--households")) r.households = recipe.households;
            if (gen->count("--seed")) r.seed = recipe.seed;
            if (gen->count("--history-days")) r.history_days = recipe.history_days;
            if (gen->count("--days")) r.simulated_days = recipe.simulated_days;
            if (gen->count("--daily-energy")) r.daily_energy_kwh = recipe.daily_energy_kwh;
            if (gen->count("--pv-share")) r.pv_share = recipe.pv_share;
            if (!gen_start.empty()) {
                const auto d = parse_date(gen_start);
                if (!d) throw Error(ErrorKind::config, "--start: invalid date '" + gen_start + "'");
                r.start = *d;
            }
            auto fleet = harness::generate_synthetic(r);
            fleet.mode = parse_mode(gen_mode);
            harness::export_bundle(fleet, gen_out);
            std::printf("wrote %zu households, %zu simulated day(s) to %s\n", fleet.households.size(),
                        fleet.days.size(), gen_out.c_str());
            return 0;
        }

        if (*val) {
            const auto issues = harness::lint_bundle(val_bundle);
            for (const auto& i : issues) std::printf("%s: %s\n", i.location.c_str(), i.message.c_str());
            if (!issues.empty()) {
                std::printf("%zu problem(s) found\n", issues.size());
                return kExitValidation;
            }
            const auto fleet = harness::ingest(val_bundle);
            std::printf("ok: %zu households, %zu simulated day(s)\n", fleet.households.size(), fleet.days.size());
            return 0;
        }

        if (*train) {
            auto fleet = harness::ingest(train_bundle);
            if (train_seed) fleet.settings.seed = *train_seed;
            const auto models = harness::train_fleet(fleet);
            for (const auto& [id, m] : models) {
                write_text(fs::path(train_out) / (id + ".json"), harness::to_json(m).dump(2) + "\n");
                std::printf("%s: load test MSE %.6g (persistence %.6g)%s\n", id.c_str(), m.load_test_mse,
                            m.load_persistence_mse, m.pv ? ", PV model trained" : "");
            }
            return 0;
        }

        if (*run) {
            auto fleet = harness::ingest(run_bundle);
            if (run_seed) fleet.settings.seed = *run_seed;
            if (!run_mode.empty()) fleet.mode = parse_mode(run_mode);
            fleet.days = select_days(fleet.days, run_days);
            if (run_threads >= 0) fleet.settings.threads = run_threads;
            std::map<std::string, harness::HouseholdModels> models;
            if (!run_models.empty())
                for (const auto& h : fleet.households)
                    models[h.id] = harness::household_models_from_json(read_json(fs::path(run_models) / (h.id + ".json")));
            const auto result = harness::run_fleet(fleet, run_models.empty() ? nullptr : &models);
            const fs::path out(run_out);
            write_text(out / "results.json", harness::results_json(fleet, result).dump(2) + "\n");
            const auto report = harness::compute_metrics(harness::day_curves(result), fleet.pricing);
            harness::write_report(report, out);
            for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
            std::printf("%zu household-day(s); fleet peak reduction %.2f%%, load factor %.4f -> %.4f, bill %.4f -> %.4f\n",
                        result.days.size(), report.fleet.peak_reduction_pct, report.fleet.load_factor_before,
                        report.fleet.load_factor_after, report.fleet.bill_before, report.fleet.bill_after);
            return 0;
        }

        if (*rep) {
            const auto [days, pricing] = harness::curves_from_results(read_json(rep_results));
            const auto report = harness::compute_metrics(days, pricing);
            harness::write_report(report, rep_out);
            for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
            std::printf("report for %zu household-day(s) written to %s\n", days.size(), rep_out.c_str());
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", std::string(to_string(e.kind())).c_str(), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
