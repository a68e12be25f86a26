#pragma once

// Start-slot assignment for shiftable appliances with per-slot PV/grid
// sourcing. The cost is the squared deviation of the grid-facing curve from
// the objective curve plus a weighted shift/delay discomfort term.

#include "drm/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drm::scheduler {

struct ApplianceWeights {
    double shift = 1.0;  // per slot of |start - preferred|
    double delay = 1.0;  // per slot of forward delay
    bool operator==(const ApplianceWeights&) const = default;
};

/// Discomfort weights by appliance type id, with a fallback.
class DiscomfortWeights {
public:
    DiscomfortWeights() = default;
    explicit DiscomfortWeights(ApplianceWeights fallback);
    static DiscomfortWeights zero() { return DiscomfortWeights({0.0, 0.0}); }

    void set(const std::string& type_id, ApplianceWeights w);
    ApplianceWeights for_type(const std::string& type_id) const;
    ApplianceWeights fallback() const { return fallback_; }
    const std::map<std::string, ApplianceWeights>& overrides() const { return per_type_; }

    bool operator==(const DiscomfortWeights&) const = default;

private:
    ApplianceWeights fallback_;
    std::map<std::string, ApplianceWeights> per_type_;
};

/// Start slots n with window.first <= n <= window.last - duration + 1 and
/// |n - preferred| <= max shift at the preferred slot, restricted to n >= earliest.
/// Throws ErrorKind::infeasible_problem naming the binding constraint when empty.
std::vector<int> feasible_starts(const ApplianceSpec& app, int earliest = 0);

/// For each slot, slots until the next peak-window start strictly after it
/// (wrapping into the next day). Without peak windows every entry is +inf.
std::array<double, kSlotsPerDay> slots_until_peak(const PricingSignal& pricing);

struct PvArbitration {
    SlotFlags flags{};
    std::array<double, kSlotsPerDay + 1> soc{};  // kWh at the start of each slot, plus end of day
    double pv_supplied_kwh = 0.0;
};

/// Slot-by-slot battery routing. A slot is served from the battery when the
/// time left before the next peak, minus the time to recharge fully, exceeds
/// the longest pending run, and the stored energy exceeds the slot's
/// shiftable demand. The first `frozen_flags.size()` slots keep the given
/// flags (online mode) as long as the battery can cover them.
PvArbitration pv_arbitrate(const PvSystem& pv, const LoadCurve& shiftable_demand, const PricingSignal& pricing,
                           int max_app_duration, std::span<const bool> frozen_flags = {});

struct SchedulingProblem {
    std::vector<ApplianceInstance> fixed;
    std::vector<ApplianceInstance> shiftable;   // sorted by instance id
    std::vector<std::optional<int>> pinned;     // per shiftable; already started in online mode
    int earliest_start = 0;                     // unpinned devices may not start earlier
    LoadCurve objective;
    PricingSignal pricing;
    std::optional<PvSystem> pv;
    std::vector<bool> frozen_pv_flags;          // leading PV decisions already taken
    DiscomfortWeights weights;
    double discomfort_blend = 0.0;              // multiplies the discomfort term
    std::optional<double> max_grid_bill;        // reject schedules costing more than this

    /// Expands counts, splits fixed/shiftable and sorts shiftable devices.
    /// Without an explicit blend, uses default_discomfort_blend(objective).
    static SchedulingProblem make(std::span<const ApplianceSpec> appliances, const LoadCurve& objective,
                                  const PricingSignal& pricing, std::optional<PvSystem> pv,
                                  DiscomfortWeights weights, std::optional<double> blend = std::nullopt);

    std::vector<int> preferred_starts() const;
    /// Candidate starts of shiftable device i (pinned -> that slot only).
    std::vector<int> candidate_starts(std::size_t i) const;
    /// Longest run among devices not yet pinned.
    int max_pending_duration() const;
    /// Number of shiftable devices available for control.
    int controllable_count() const { return static_cast<int>(shiftable.size()); }
};

/// 0.1 x (mean objective power)^2.
double default_discomfort_blend(const LoadCurve& objective);

struct ScheduleAssignment {
    std::vector<std::string> instance_ids;  // same order as problem.shiftable
    std::vector<int> starts;
    SlotFlags pv_flags{};
    std::array<double, kSlotsPerDay + 1> soc{};

    bool operator==(const ScheduleAssignment&) const = default;
};

/// Assignment for the given starts with PV flags from pv_arbitrate.
ScheduleAssignment make_assignment(const SchedulingProblem& problem, std::span<const int> starts);

struct ShiftTallies {
    std::array<int, kSlotsPerDay> shifted_to{};    // devices moved into slot t
    std::array<int, kSlotsPerDay> shifted_away{};  // devices moved out of slot t
};

ShiftTallies shift_tallies(const SchedulingProblem& problem, const ScheduleAssignment& assignment);

struct Violation {
    std::string constraint;  // "nonnegative", "capacity", "single-start", "preference", "granularity", ...
    std::string instance_id;
    int slot = -1;
    std::string message;
};

/// Standalone check of every placement rule; empty when feasible.
std::vector<Violation> validate_assignment(const SchedulingProblem& problem, const ScheduleAssignment& assignment);

/// Grid/PV split of the scheduled day (fixed devices first, then shiftable).
struct ScheduledCurves {
    LoadCurve all;
    LoadCurve grid;
    LoadCurve pv_supplied;
};
ScheduledCurves scheduled_curves(const SchedulingProblem& problem, const ScheduleAssignment& assignment);

struct CostBreakdown {
    double deviation = 0.0;
    double discomfort = 0.0;
    double blend = 0.0;
    double total = 0.0;
};

/// Throws ErrorKind::feasibility listing violations if the assignment is infeasible.
CostBreakdown evaluate_cost(const SchedulingProblem& problem, const ScheduleAssignment& assignment);

struct SolverConfig {
    double exact_threshold = 1e6;  // exhaustive search up to this many start tuples
    int restarts = 8;              // random restarts after the preferred-start run
    int max_passes = 200;
    std::uint64_t seed = 1;
    bool operator==(const SolverConfig&) const = default;
};

enum class SolveMethod { trivial, exhaustive, local_search };
std::string_view to_string(SolveMethod m);

struct SolveResult {
    ScheduleAssignment assignment;
    CostBreakdown cost;
    SolveMethod method = SolveMethod::trivial;
    std::vector<double> cost_trace;  // accepted local-search costs, best run
    std::uint64_t evaluations = 0;
};

/// Throws ErrorKind::infeasible_problem listing every device without a start.
SolveResult solve(const SchedulingProblem& problem, const SolverConfig& config = {});

nlohmann::json to_json(const SchedulingProblem& problem, const ScheduleAssignment& assignment);

}  // namespace drm::scheduler
