#include "drm/curve_ops.hpp"

#include "drm/error.hpp"

#include <algorithm>

namespace drm {

void accumulate_run(SlotValues& acc, const ApplianceInstance& appliance, int start) {
    const auto& spec = appliance.spec;
    if (start < 0 || start + spec.duration_slots > kSlotsPerDay)
        throw Error(ErrorKind::feasibility, "appliance '" + appliance.instance_id + "' starting at slot " +
                                                std::to_string(start + 1) + " runs outside the day");
    for (int k = 0; k < spec.duration_slots; ++k)
        acc[static_cast<std::size_t>(start + k)] += spec.power_profile[static_cast<std::size_t>(k)];
}

namespace {

void check_sizes(std::span<const ApplianceInstance> instances, std::span<const int> starts) {
    if (instances.size() != starts.size())
        throw Error(ErrorKind::shape, "got " + std::to_string(starts.size()) + " starts for " +
                                          std::to_string(instances.size()) + " appliances");
}

}  // namespace

LoadCurve total_curve(std::span<const ApplianceInstance> instances, std::span<const int> starts) {
    check_sizes(instances, starts);
    SlotValues acc{};
    for (std::size_t i = 0; i < instances.size(); ++i) accumulate_run(acc, instances[i], starts[i]);
    return LoadCurve(acc);
}

CurveBreakdown split_by_source(std::span<const ApplianceInstance> instances,
                               std::span<const int> starts, const SlotFlags& pv_flags) {
    check_sizes(instances, starts);
    SlotValues all{}, shift{};
    for (std::size_t i = 0; i < instances.size(); ++i) {
        accumulate_run(all, instances[i], starts[i]);
        if (instances[i].spec.kind == ApplianceKind::shiftable) accumulate_run(shift, instances[i], starts[i]);
    }
    SlotValues grid{}, pv{};
    for (std::size_t t = 0; t < grid.size(); ++t) {
        pv[t] = pv_flags[t] ? shift[t] : 0.0;
        grid[t] = pv_flags[t] ? std::max(0.0, all[t] - shift[t]) : all[t];
    }
    return {LoadCurve(all), LoadCurve(shift), LoadCurve(grid), LoadCurve(pv)};
}

double load_factor(const LoadCurve& curve) {
    const double peak = curve.peak();
    if (!(peak > 0.0)) throw Error(ErrorKind::undefined_metric, "load factor of an all-zero curve");
    return curve.mean() / peak;
}

double bill(std::span<const double> grid_kw, std::span<const double> price_per_kwh) {
    if (grid_kw.size() != kSlotsPerDay || price_per_kwh.size() != kSlotsPerDay)
        throw Error(ErrorKind::format, "bill needs 48 loads and 48 prices, got " +
                                           std::to_string(grid_kw.size()) + " and " +
                                           std::to_string(price_per_kwh.size()));
    double cost = 0.0;
    for (std::size_t t = 0; t < grid_kw.size(); ++t) cost += grid_kw[t] * kSlotHours * price_per_kwh[t];
    return cost;
}

double bill(const LoadCurve& grid_curve, const PricingSignal& pricing) {
    return bill(grid_curve.span(), pricing.price_per_slot);
}

}  // namespace drm
