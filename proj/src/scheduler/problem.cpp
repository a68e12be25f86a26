#include "drm/curve_ops.hpp"
#include "drm/error.hpp"
#include "evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace drm::scheduler {

DiscomfortWeights::DiscomfortWeights(ApplianceWeights fallback) : fallback_(fallback) {
    if (!(fallback.shift >= 0.0) || !(fallback.delay >= 0.0))
        throw Error(ErrorKind::config, "discomfort weights must be >= 0");
}

void DiscomfortWeights::set(const std::string& type_id, ApplianceWeights w) {
    if (!(w.shift >= 0.0) || !(w.delay >= 0.0))
        throw Error(ErrorKind::config, "discomfort weights for '" + type_id + "' must be >= 0");
    per_type_[type_id] = w;
}

ApplianceWeights DiscomfortWeights::for_type(const std::string& type_id) const {
    const auto it = per_type_.find(type_id);
    return it == per_type_.end() ? fallback_ : it->second;
}

std::vector<int> feasible_starts(const ApplianceSpec& app, int earliest) {
    app.validate();
    const int latest = app.window.last - app.duration_slots + 1;
    const int cp = app.max_shift();
    const int lo = std::max({app.window.first, app.preferred_start - cp, earliest, 0});
    const int hi = std::min({latest, app.preferred_start + cp, kSlotsPerDay - app.duration_slots});
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    if (out.empty()) {
        std::string why;
        if (app.preferred_start - cp > latest || app.preferred_start + cp < app.window.first)
            why = "preference shift of at most " + std::to_string(cp) + " slots from slot " +
                  std::to_string(app.preferred_start + 1) + " never reaches the permitted window";
        else
            why = "every permitted start precedes slot " + std::to_string(earliest + 1);
        throw Error(ErrorKind::infeasible_problem, "appliance '" + app.id + "' has no feasible start: " + why);
    }
    return out;
}

double default_discomfort_blend(const LoadCurve& objective) {
    const double m = objective.mean();
    return 0.1 * m * m;
}

SchedulingProblem SchedulingProblem::make(std::span<const ApplianceSpec> appliances, const LoadCurve& objective,
                                          const PricingSignal& pricing, std::optional<PvSystem> pv,
                                          DiscomfortWeights weights, std::optional<double> blend) {
    pricing.validate();
    if (pv) pv->validate();
    SchedulingProblem p;
    for (auto& inst : expand_instances(appliances)) {
        inst.spec.validate();
        (inst.spec.kind == ApplianceKind::fixed ? p.fixed : p.shiftable).push_back(std::move(inst));
    }
    std::sort(p.shiftable.begin(), p.shiftable.end(),
              [](const ApplianceInstance& a, const ApplianceInstance& b) { return a.instance_id < b.instance_id; });
    p.pinned.assign(p.shiftable.size(), std::nullopt);
    p.objective = objective;
    p.pricing = pricing;
    p.pv = std::move(pv);
    p.weights = std::move(weights);
    p.discomfort_blend = blend ? *blend : default_discomfort_blend(objective);
    if (!(p.discomfort_blend >= 0.0)) throw Error(ErrorKind::config, "discomfort blend must be >= 0");
    return p;
}

std::vector<int> SchedulingProblem::preferred_starts() const {
    std::vector<int> out;
    out.reserve(shiftable.size());
    for (const auto& a : shiftable) out.push_back(a.spec.preferred_start);
    return out;
}

std::vector<int> SchedulingProblem::candidate_starts(std::size_t i) const {
    if (i < pinned.size() && pinned[i]) return {*pinned[i]};
    try {
        return feasible_starts(shiftable[i].spec, earliest_start);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(e.what()) + " [instance " + shiftable[i].instance_id + "]");
    }
}

int SchedulingProblem::max_pending_duration() const {
    int m = 0;
    for (std::size_t i = 0; i < shiftable.size(); ++i)
        if (i >= pinned.size() || !pinned[i]) m = std::max(m, shiftable[i].spec.duration_slots);
    return m;
}

ScheduleAssignment make_assignment(const SchedulingProblem& problem, std::span<const int> starts) {
    if (starts.size() != problem.shiftable.size())
        throw Error(ErrorKind::shape, "one start per shiftable appliance required");
    ScheduleAssignment a;
    for (const auto& inst : problem.shiftable) a.instance_ids.push_back(inst.instance_id);
    a.starts.assign(starts.begin(), starts.end());
    detail::Evaluator ev(problem);
    PvArbitration pv;
    ev.score(starts, &pv);
    a.pv_flags = pv.flags;
    a.soc = pv.soc;
    return a;
}

ShiftTallies shift_tallies(const SchedulingProblem& problem, const ScheduleAssignment& assignment) {
    ShiftTallies t;
    const std::size_t n = std::min(problem.shiftable.size(), assignment.starts.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int pref = problem.shiftable[i].spec.preferred_start;
        const int s = assignment.starts[i];
        if (s == pref) continue;
        if (s >= 0 && s < kSlotsPerDay) ++t.shifted_to[static_cast<std::size_t>(s)];
        ++t.shifted_away[static_cast<std::size_t>(pref)];
    }
    return t;
}

std::vector<Violation> validate_assignment(const SchedulingProblem& problem, const ScheduleAssignment& assignment) {
    std::vector<Violation> out;
    const auto& devs = problem.shiftable;
    if (assignment.starts.size() != devs.size() || assignment.instance_ids.size() != devs.size()) {
        out.push_back({"single-start", "", -1,
                       "assignment lists " + std::to_string(assignment.starts.size()) + " starts for " +
                           std::to_string(devs.size()) + " shiftable devices"});
        return out;
    }
    for (std::size_t i = 0; i < devs.size(); ++i) {
        const auto& inst = devs[i];
        const auto& spec = inst.spec;
        const int s = assignment.starts[i];
        auto flag = [&](const char* rule, std::string msg) {
            out.push_back({rule, inst.instance_id, s, std::move(msg)});
        };
        if (assignment.instance_ids[i] != inst.instance_id)
            flag("single-start", "expected device '" + inst.instance_id + "' at position " + std::to_string(i) +
                                     ", found '" + assignment.instance_ids[i] + "'");
        if (s < 0 || s + spec.duration_slots > kSlotsPerDay) {
            flag("granularity", "run of " + std::to_string(spec.duration_slots) + " slots does not fit the day");
            continue;
        }
        if (i < problem.pinned.size() && problem.pinned[i]) {
            if (s != *problem.pinned[i]) flag("pinned", "device already started at slot " + std::to_string(*problem.pinned[i] + 1));
            continue;
        }
        if (s < spec.window.first || s > spec.window.last - spec.duration_slots + 1)
            flag("single-start", "start outside permitted window [" + std::to_string(spec.window.first + 1) + ", " +
                                     std::to_string(spec.window.last - spec.duration_slots + 2) + "]");
        if (std::abs(s - spec.preferred_start) > spec.max_shift())
            flag("preference", "shift of " + std::to_string(s - spec.preferred_start) + " slots exceeds maximum " +
                                   std::to_string(spec.max_shift()));
        if (s < problem.earliest_start)
            flag("online", "start precedes current slot " + std::to_string(problem.earliest_start + 1));
    }

    const auto tallies = shift_tallies(problem, assignment);
    for (int t = 0; t < kSlotsPerDay; ++t) {
        const auto k = static_cast<std::size_t>(t);
        if (tallies.shifted_to[k] < 0 || tallies.shifted_away[k] < 0)
            out.push_back({"nonnegative", "", t, "negative shift tally"});
        if (tallies.shifted_away[k] > problem.controllable_count())
            out.push_back({"capacity", "", t,
                           std::to_string(tallies.shifted_away[k]) + " devices shifted away, only " +
                               std::to_string(problem.controllable_count()) + " controllable"});
    }

    const bool any_pv = std::any_of(assignment.pv_flags.begin(), assignment.pv_flags.end(), [](bool b) { return b; });
    if (!problem.pv && any_pv) out.push_back({"pv-source", "", -1, "PV flags set without a PV system"});
    if (problem.pv) {
        for (std::size_t t = 0; t < assignment.soc.size(); ++t) {
            const double soc = assignment.soc[t];
            if (!(soc >= 0.0 && soc <= problem.pv->battery_capacity_kwh + 1e-12))
                out.push_back({"pv-source", "", static_cast<int>(t), "battery state of charge out of range"});
        }
    }

    if (problem.max_grid_bill && out.empty()) {
        const double cost = bill(scheduled_curves(problem, assignment).grid, problem.pricing);
        if (cost > *problem.max_grid_bill)
            out.push_back({"bill", "", -1,
                           "grid bill " + std::to_string(cost) + " exceeds cap " + std::to_string(*problem.max_grid_bill)});
    }
    return out;
}

ScheduledCurves scheduled_curves(const SchedulingProblem& problem, const ScheduleAssignment& assignment) {
    std::vector<ApplianceInstance> all;
    std::vector<int> starts;
    for (const auto& f : problem.fixed) {
        all.push_back(f);
        starts.push_back(f.spec.preferred_start);
    }
    for (std::size_t i = 0; i < problem.shiftable.size(); ++i) {
        all.push_back(problem.shiftable[i]);
        starts.push_back(assignment.starts.at(i));
    }
    auto split = split_by_source(all, starts, assignment.pv_flags);
    return {split.all, split.grid, split.pv_supplied};
}

CostBreakdown evaluate_cost(const SchedulingProblem& problem, const ScheduleAssignment& assignment) {
    const auto violations = validate_assignment(problem, assignment);
    if (!violations.empty()) {
        std::string msg = "infeasible assignment:";
        for (const auto& v : violations)
            msg += " [" + v.constraint + (v.instance_id.empty() ? "" : " " + v.instance_id) +
                   (v.slot >= 0 ? " slot " + std::to_string(v.slot + 1) : "") + ": " + v.message + "]";
        throw Error(ErrorKind::feasibility, msg);
    }
    detail::Evaluator ev(problem);
    const auto s = ev.score_with_flags(assignment.starts, assignment.pv_flags);
    return {s.deviation, s.discomfort, problem.discomfort_blend, s.total};
}

nlohmann::json to_json(const SchedulingProblem& problem, const ScheduleAssignment& assignment) {
    nlohmann::json apps = nlohmann::json::array();
    for (std::size_t i = 0; i < problem.shiftable.size(); ++i) {
        const auto& inst = problem.shiftable[i];
        const int s = assignment.starts.at(i);
        nlohmann::json sources = nlohmann::json::array();
        for (int k = 0; k < inst.spec.duration_slots; ++k)
            if (assignment.pv_flags[static_cast<std::size_t>(s + k)]) sources.push_back(s + k + 1);
        apps.push_back({{"id", inst.instance_id},
                        {"type", inst.spec.id},
                        {"preferred_start", inst.spec.preferred_start + 1},
                        {"scheduled_start", s + 1},
                        {"shift", s - inst.spec.preferred_start},
                        {"source_slots", std::move(sources)}});
    }
    nlohmann::json flags = nlohmann::json::array();
    for (bool b : assignment.pv_flags) flags.push_back(b ? 1 : 0);
    return {{"appliances", std::move(apps)}, {"pv_flags", std::move(flags)}};
}

}  // namespace drm::scheduler
