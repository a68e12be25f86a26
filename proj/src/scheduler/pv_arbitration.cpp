#include "drm/error.hpp"
#include "evaluator.hpp"

#include <algorithm>
#include <limits>

namespace drm::scheduler {

std::array<double, kSlotsPerDay> slots_until_peak(const PricingSignal& pricing) {
    std::array<double, kSlotsPerDay> out;
    out.fill(std::numeric_limits<double>::infinity());
    if (pricing.peak_windows.empty()) return out;
    for (int h = 0; h < kSlotsPerDay; ++h) {
        int best = std::numeric_limits<int>::max();
        for (const auto& w : pricing.peak_windows) {
            const int delta = w.first > h ? w.first - h : w.first + kSlotsPerDay - h;
            best = std::min(best, delta);
        }
        out[static_cast<std::size_t>(h)] = best;
    }
    return out;
}

namespace detail {

void arbitrate(const PvSystem& pv, const SlotValues& demand, const std::array<double, kSlotsPerDay>& until_peak,
               int max_app_duration, std::span<const bool> frozen_flags, PvArbitration& out) {
    const double cap = pv.battery_capacity_kwh;
    double soc = std::clamp(pv.initial_soc_kwh, 0.0, cap);
    out.pv_supplied_kwh = 0.0;
    out.soc[0] = soc;
    for (std::size_t h = 0; h < static_cast<std::size_t>(kSlotsPerDay); ++h) {
        const double need = demand[h] * kSlotHours;
        bool use;
        if (h < frozen_flags.size()) {
            use = frozen_flags[h] && soc >= need;
        } else {
            const double recharge_slots = (cap - soc) / pv.charge_rate_kw / kSlotHours;
            use = (until_peak[h] - recharge_slots > max_app_duration) && (soc > need);
        }
        out.flags[h] = use;
        const double drawn = use ? need : 0.0;
        out.pv_supplied_kwh += drawn;
        soc = std::clamp(soc + pv.charge_efficiency * pv.generation[static_cast<int>(h)] * kSlotHours - drawn, 0.0,
                         cap);
        out.soc[h + 1] = soc;
    }
}

}  // namespace detail

PvArbitration pv_arbitrate(const PvSystem& pv, const LoadCurve& shiftable_demand, const PricingSignal& pricing,
                           int max_app_duration, std::span<const bool> frozen_flags) {
    pv.validate();
    if (max_app_duration < 0) throw Error(ErrorKind::parameter, "max_app_duration must be >= 0");
    if (frozen_flags.size() > static_cast<std::size_t>(kSlotsPerDay))
        throw Error(ErrorKind::shape, "more frozen PV flags than slots");
    PvArbitration out;
    detail::arbitrate(pv, shiftable_demand.values(), slots_until_peak(pricing), max_app_duration, frozen_flags, out);
    return out;
}

}  // namespace drm::scheduler
