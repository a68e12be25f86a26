#include "drm/error.hpp"
#include "drm/objective.hpp"

#include <algorithm>
#include <cmath>

namespace drm::objective {

namespace {

ObjectiveCurve shape(const ObjectiveBasis& basis, const PricingSignal& pricing, std::span<const double> realized,
                     ObjectiveMode mode) {
    pricing.validate();
    const std::size_t k = realized.size();
    const auto& predicted = basis.predicted;

    // Reference day for the off-peak test: observations so far, the
    // previous day for slots not yet observed.
    SlotValues ref = basis.previous_day.values();
    for (std::size_t t = 0; t < k; ++t) ref[t] = realized[t];
    const auto means = segment_means(LoadCurve(ref), offpeak_segments(pricing, basis.model.segments));
    double level = 0.0;
    for (double m : means) level += m;

    ObjectiveCurve out;
    out.mode = mode;
    out.cap_active = level < basis.l_min;
    out.permitted_max = std::max(0.0, basis.model.evaluate(means));
    out.realized_slots = static_cast<int>(k);
    out.pricing = pricing;
    out.basis = basis;

    SlotValues v{};
    double remaining = 0.0;
    for (int t = 0; t < kSlotsPerDay; ++t) remaining += predicted[t];
    for (std::size_t t = 0; t < k; ++t) {
        v[t] = realized[t];
        out.provenance[t] = SlotSource::realized;
        remaining -= realized[t];
    }

    double peak_sum = 0.0;
    double weight_sum = 0.0;
    double inverse_price_sum = 0.0;
    bool any_offpeak = false;
    for (auto t = k; t < static_cast<std::size_t>(kSlotsPerDay); ++t) {
        const int slot = static_cast<int>(t);
        if (pricing.is_peak(slot)) {
            double value = predicted[slot];
            out.provenance[t] = SlotSource::predicted;
            if (out.cap_active && out.permitted_max < value) {
                value = out.permitted_max;
                out.provenance[t] = SlotSource::capped;
            }
            v[t] = value;
            peak_sum += value;
        } else {
            any_offpeak = true;
            out.provenance[t] = SlotSource::predicted;
            weight_sum += predicted[slot] / pricing.price_per_slot[t];
            inverse_price_sum += 1.0 / pricing.price_per_slot[t];
        }
    }

    const double offpeak_energy = std::max(0.0, remaining - peak_sum);
    if (any_offpeak) {
        for (auto t = k; t < static_cast<std::size_t>(kSlotsPerDay); ++t) {
            const int slot = static_cast<int>(t);
            if (pricing.is_peak(slot)) continue;
            const double inv_price = 1.0 / pricing.price_per_slot[t];
            v[t] = weight_sum > 0.0 ? offpeak_energy * (predicted[slot] * inv_price) / weight_sum
                                    : offpeak_energy * inv_price / inverse_price_sum;
        }
    }
    out.values = LoadCurve(v);
    return out;
}

}  // namespace

ObjectiveCurve build_objective(const LoadCurve& predicted, const PricingSignal& pricing,
                               const PeakRegressionModel& model, double l_min, const LoadCurve& previous_day) {
    if (!(l_min > 0.0) || !std::isfinite(l_min)) throw Error(ErrorKind::parameter, "l_min must be > 0");
    ObjectiveBasis basis{predicted, model, l_min, previous_day};
    return shape(basis, pricing, {}, ObjectiveMode::offline);
}

ObjectiveCurve update_online(const ObjectiveCurve& current, std::span<const double> realized,
                             const PricingSignal& latest_pricing, int slot_now) {
    if (slot_now < 1 || slot_now > kSlotsPerDay)
        throw Error(ErrorKind::parameter, "slot_now " + std::to_string(slot_now) + " outside 1..48");
    if (realized.size() > static_cast<std::size_t>(slot_now - 1))
        throw Error(ErrorKind::temporal_consistency, "got " + std::to_string(realized.size()) +
                                                         " realized slots before slot " + std::to_string(slot_now));
    if (realized.size() < static_cast<std::size_t>(slot_now - 1))
        throw Error(ErrorKind::temporal_consistency, "missing realized data before slot " + std::to_string(slot_now));
    if (static_cast<int>(realized.size()) < current.realized_slots)
        throw Error(ErrorKind::temporal_consistency, "online update moves backwards in time");
    for (double r : realized)
        if (!std::isfinite(r) || r < 0.0) throw Error(ErrorKind::format, "realized consumption must be finite and >= 0");
    if (!(current.basis.l_min > 0.0)) throw Error(ErrorKind::parameter, "l_min must be > 0");
    return shape(current.basis, latest_pricing, realized, ObjectiveMode::online);
}

}  // namespace drm::objective
