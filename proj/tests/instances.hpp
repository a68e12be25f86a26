#pragma once

// Seeded random scheduling instances shared by unit and acceptance tests.

#include "drm/core.hpp"
#include "drm/curve_ops.hpp"
#include "drm/rng.hpp"
#include "drm/scheduler.hpp"

#include <functional>
#include <string>
#include <vector>

namespace drm::test {

inline PricingSignal random_pricing(Rng& rng) {
    PricingSignal p;
    for (auto& x : p.price_per_slot) x = rng.uniform(0.05, 0.2);
    const int first = static_cast<int>(rng.uniform_int(24, 40));
    const int last = std::min(47, first + static_cast<int>(rng.uniform_int(2, 10)));
    for (int t = first; t <= last; ++t) p.price_per_slot[static_cast<std::size_t>(t)] = rng.uniform(0.25, 0.45);
    p.peak_windows = {{first, last}};
    return p;
}

inline ApplianceSpec random_shiftable(Rng& rng, const std::string& id, int max_duration = 6) {
    const int dur = static_cast<int>(rng.uniform_int(1, max_duration));
    std::vector<double> profile(static_cast<std::size_t>(dur));
    for (auto& x : profile) x = rng.uniform(0.2, 2.5);
    const int first = static_cast<int>(rng.uniform_int(0, kSlotsPerDay - dur));
    const int last = static_cast<int>(rng.uniform_int(first + dur - 1, kSlotsPerDay - 1));
    const int pref = static_cast<int>(rng.uniform_int(first, last - dur + 1));
    const int shift = static_cast<int>(rng.uniform_int(0, 12));
    auto spec = ApplianceSpec::make_shiftable(id, std::move(profile), {first, last}, pref, shift);
    if (rng.bernoulli(0.2)) spec.count = 2;
    return spec;
}

inline PvSystem random_pv(Rng& rng) {
    PvSystem pv;
    SlotValues g{};
    const double peak = rng.uniform(0.3, 1.5);
    for (int t = 12; t < 40; ++t) {
        const double x = (t - 11.5) / 28.0;
        g[static_cast<std::size_t>(t)] = peak * std::sin(3.141592653589793 * x) * rng.uniform(0.6, 1.0);
    }
    pv.generation = LoadCurve(g);
    pv.battery_capacity_kwh = rng.uniform(0.5, 4.0);
    pv.initial_soc_kwh = rng.uniform(0.0, pv.battery_capacity_kwh);
    pv.charge_rate_kw = rng.uniform(0.5, 2.0);
    pv.charge_efficiency = rng.uniform(0.8, 1.0);
    return pv;
}

struct InstanceOptions {
    int min_shiftable = 1;
    int max_shiftable = 3;  // device instances after expanding counts
    double pv_probability = 0.5;
    double cap_probability = 0.5;  // bill cap at the preferred-start bill
};

/// Random household day: a few fixed loads, shiftable devices with random
/// windows and preference shifts, optional PV and bill cap.
inline scheduler::SchedulingProblem random_problem(Rng& rng, const InstanceOptions& opt = {}) {
    const auto pricing = random_pricing(rng);
    std::vector<ApplianceSpec> apps;
    apps.push_back(ApplianceSpec::make_fixed("fridge", std::vector<double>(48, rng.uniform(0.05, 0.2)), 0));
    const int lamp_len = static_cast<int>(rng.uniform_int(2, 8));
    apps.push_back(ApplianceSpec::make_fixed("lamp", std::vector<double>(static_cast<std::size_t>(lamp_len), 0.3),
                                             static_cast<int>(rng.uniform_int(30, 48 - lamp_len))));
    const int target = static_cast<int>(rng.uniform_int(opt.min_shiftable, opt.max_shiftable));
    int instances = 0;
    for (int k = 0; instances < target; ++k) {
        auto spec = random_shiftable(rng, "dev" + std::to_string(k));
        if (instances + spec.count > target) spec.count = 1;
        instances += spec.count;
        apps.push_back(std::move(spec));
    }

    SlotValues obj;
    for (auto& x : obj) x = rng.uniform(0.0, 3.0);
    std::optional<PvSystem> pv;
    if (rng.bernoulli(opt.pv_probability)) pv = random_pv(rng);

    scheduler::DiscomfortWeights w({rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)});
    if (rng.bernoulli(0.3)) w.set("dev0", {0.0, 0.0});
    auto problem = scheduler::SchedulingProblem::make(apps, LoadCurve(obj), pricing, pv, w,
                                                      rng.bernoulli(0.5) ? std::optional<double>{}
                                                                         : std::optional<double>{rng.uniform(0.0, 2.0)});
    if (rng.bernoulli(opt.cap_probability)) {
        const auto pref = scheduler::make_assignment(problem, problem.preferred_starts());
        problem.max_grid_bill = bill(scheduler::scheduled_curves(problem, pref).grid, pricing);
    }
    return problem;
}

/// Calls `visit` with every tuple of candidate starts.
inline void for_each_tuple(const scheduler::SchedulingProblem& p,
                           const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<std::vector<int>> cands;
    for (std::size_t i = 0; i < p.shiftable.size(); ++i) cands.push_back(p.candidate_starts(i));
    std::vector<int> cur(cands.size());
    std::function<void(std::size_t)> rec = [&](std::size_t d) {
        if (d == cands.size()) {
            visit(cur);
            return;
        }
        for (int s : cands[d]) {
            cur[d] = s;
            rec(d + 1);
        }
    };
    rec(0);
}

/// Lowest total over every admissible tuple, each scored by evaluate_cost.
inline std::optional<double> enumerated_optimum(const scheduler::SchedulingProblem& p) {
    std::optional<double> best;
    for_each_tuple(p, [&](const std::vector<int>& starts) {
        const auto a = scheduler::make_assignment(p, starts);
        if (!scheduler::validate_assignment(p, a).empty()) return;
        const double c = scheduler::evaluate_cost(p, a).total;
        if (!best || c < *best) best = c;
    });
    return best;
}

}  // namespace drm::test
