#pragma once

// Fleet simulation: bundle ingestion/export, synthetic fleets, the daily
// forecast -> objective -> schedule pipeline and metric reporting.

#include "drm/core.hpp"
#include "drm/forecast.hpp"
#include "drm/objective.hpp"
#include "drm/scheduler.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drm::harness {

inline constexpr const char* kBundleFormat = "drm-bundle/1";
inline constexpr const char* kResultsFormat = "drm-results/1";
inline constexpr const char* kReportFormat = "drm-report/1";

/// Household archetype names understood by the generator.
std::vector<std::string> known_archetypes();

struct SyntheticRecipe {
    int households = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> archetypes = known_archetypes();
    double daily_energy_kwh = 14.0;  // fleet mean of historical daily consumption
    int history_days = 365;          // days before the first simulated day
    int simulated_days = 1;
    Date start{std::chrono::year{2023}, std::chrono::January, std::chrono::day{1}};
    double pv_share = 1.0;           // fraction of households with PV
    double pv_peak_kw = 1.0;
    double battery_kwh = 2.0;
    SlotInterval peak_window{34, 43};
    double valley_price = 0.06;      // before 07:00
    double shoulder_price = 0.12;
    double peak_price = 0.30;

    void validate() const;
    bool operator==(const SyntheticRecipe&) const = default;
};

struct FleetSettings {
    forecast::TrainingConfig training;
    int regression_segments = 2;
    int regression_degree = 1;
    std::optional<double> l_min;            // kW; default: historical mean off-peak level
    scheduler::DiscomfortWeights discomfort;
    std::optional<double> discomfort_blend; // default: 0.1 x (mean objective)^2
    bool no_harm = true;                    // after-bill may not exceed before-bill
    scheduler::SolverConfig solver;
    double online_noise = 0.1;              // relative sd of observed vs predicted load
    std::uint64_t seed = 1;
    int threads = 0;                        // 0: hardware concurrency

    void validate() const;
    bool operator==(const FleetSettings&) const = default;
};

struct FleetConfig {
    std::vector<Household> households;
    PricingSignal pricing;
    std::vector<Date> days;  // simulated days
    objective::ObjectiveMode mode = objective::ObjectiveMode::offline;
    FleetSettings settings;
    std::optional<SyntheticRecipe> recipe;

    void validate() const;
    bool operator==(const FleetConfig&) const = default;
};

FleetConfig generate_synthetic(const SyntheticRecipe& recipe);
PricingSignal recipe_pricing(const SyntheticRecipe& recipe);

/// Reads manifest.json plus the CSV files it lists. Errors cite file and line.
FleetConfig ingest(const std::filesystem::path& bundle_dir);
void export_bundle(const FleetConfig& fleet, const std::filesystem::path& bundle_dir);

struct LintIssue {
    std::string location;  // file[:line]
    std::string message;
};
/// Every problem found in a bundle; empty when it ingests cleanly.
std::vector<LintIssue> lint_bundle(const std::filesystem::path& bundle_dir);

nlohmann::json to_json(const FleetSettings& settings);
FleetSettings settings_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticRecipe& recipe);
SyntheticRecipe recipe_from_json(const nlohmann::json& j);

/// Trained per-household state reused across simulated days.
struct HouseholdModels {
    forecast::NarModel load;
    std::optional<forecast::NarModel> pv;
    objective::PeakRegressionModel regression;
    double l_min = 0.0;
    double load_test_mse = 0.0;
    double load_persistence_mse = 0.0;
};

/// Trains on history strictly before `first_day`.
HouseholdModels train_household(const Household& household, const PricingSignal& pricing,
                                const FleetSettings& settings, Date first_day, std::uint64_t seed);
nlohmann::json to_json(const HouseholdModels& models);
HouseholdModels household_models_from_json(const nlohmann::json& j);

/// Trains every household with the seeds run_fleet would use.
std::map<std::string, HouseholdModels> train_fleet(const FleetConfig& fleet);

struct DayResult {
    std::string household_id;
    Date date;
    LoadCurve before;       // preferred starts, all from the grid
    LoadCurve after;        // grid-facing curve of the schedule
    LoadCurve after_all;    // every device, any source
    LoadCurve pv_supplied;
    LoadCurve predicted;
    LoadCurve objective;
    scheduler::ScheduleAssignment assignment;
    nlohmann::json assignment_json;
    scheduler::CostBreakdown cost;
    scheduler::SolveMethod method = scheduler::SolveMethod::trivial;
    int solves = 0;
};

DayResult run_day(const Household& household, const HouseholdModels& models, const PricingSignal& pricing,
                  Date date, objective::ObjectiveMode mode, const FleetSettings& settings, std::uint64_t seed);

struct FleetResult {
    std::vector<DayResult> days;  // household order, then date order
};

/// Trains (unless models are supplied) and simulates every household-day.
FleetResult run_fleet(const FleetConfig& fleet,
                      const std::map<std::string, HouseholdModels>* models = nullptr);

nlohmann::ordered_json results_json(const FleetConfig& fleet, const FleetResult& result);

struct DayMetrics {
    std::string household_id;
    Date date;
    double peak_before_kwh = 0.0;
    double peak_after_kwh = 0.0;
    double load_factor_before = 0.0;
    double load_factor_after = 0.0;
    double bill_before = 0.0;
    double bill_after = 0.0;
    double energy_before_kwh = 0.0;  // appliance energy, any source
    double energy_after_kwh = 0.0;
};

struct Aggregate {
    int household_days = 0;
    double peak_before_kwh = 0.0;
    double peak_after_kwh = 0.0;
    double peak_reduction_pct = 0.0;
    double load_factor_before = 0.0;
    double load_factor_after = 0.0;
    double load_factor_improvement_pct = 0.0;
    double bill_before = 0.0;
    double bill_after = 0.0;
    double bill_reduction_pct = 0.0;
    double energy_kwh = 0.0;
    int load_factor_improved_days = 0;
};

struct HouseholdMetrics {
    std::string household_id;
    bool excluded = false;
    Aggregate metrics;
};

struct PeriodMetrics {
    std::string label;  // "Jan-Feb", ...
    int households = 0;
    Aggregate metrics;
};

struct MetricsReport {
    std::vector<DayMetrics> days;
    std::vector<HouseholdMetrics> households;
    Aggregate fleet;
    std::vector<PeriodMetrics> periods;  // calendar two-month windows with data
    std::vector<std::string> warnings;
};

/// Input rows pairing before/after curves of one household-day.
struct DayCurves {
    std::string household_id;
    Date date;
    LoadCurve before;
    LoadCurve after;
    LoadCurve after_all;
};

DayMetrics day_metrics(const DayCurves& day, const PricingSignal& pricing);
/// Sums and ratios over one household's days. Throws undefined_metric when
/// the days carry no peak-window energy before scheduling.
Aggregate household_aggregate(std::span<const DayMetrics> days);
/// Peak reduction weighted by before-peak energy, the rest by energy.
Aggregate fleet_aggregate(std::span<const Aggregate> households);
MetricsReport compute_metrics(std::span<const DayCurves> days, const PricingSignal& pricing);
std::vector<DayCurves> day_curves(const FleetResult& result);
/// Reads curves and pricing back from a results document.
std::pair<std::vector<DayCurves>, PricingSignal> curves_from_results(const nlohmann::json& results);

nlohmann::ordered_json report_json(const MetricsReport& report);
std::string days_csv(const MetricsReport& report);
std::string households_csv(const MetricsReport& report);
std::string periods_csv(const MetricsReport& report);
/// Writes report.json, days.csv, households.csv and periods.csv.
void write_report(const MetricsReport& report, const std::filesystem::path& out_dir);

/// Shortest round-trip text for a double.
std::string format_double(double v);

}  // namespace drm::harness
