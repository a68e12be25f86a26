#pragma once

// Objective consumption curve: the per-slot target the scheduler tracks.
//
// Peak-window slots follow the forecast unless the reference off-peak usage
// falls below `l_min`, in which case they are limited to the permitted
// maximum predicted by a polynomial regression of daily peak demand on
// off-peak segment means. Off-peak slots redistribute the remaining forecast
// energy in proportion to forecast / price.

#include "drm/core.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace drm::objective {

/// Off-peak slots in ascending order, cut into `segments` consecutive
/// chunks of near-equal size (earlier chunks take the remainder).
std::vector<std::vector<int>> offpeak_segments(const PricingSignal& pricing, int segments);

/// Mean power of `curve` over each segment.
std::vector<double> segment_means(const LoadCurve& curve, const std::vector<std::vector<int>>& segments);

struct RegressionDiagnostics {
    int days = 0;
    double rss = 0.0;                 // fitted model
    double rss_intercept_only = 0.0;  // beta-only model
    double r_squared = 0.0;
    bool operator==(const RegressionDiagnostics&) const = default;
};

/// peak_max = sum_i sum_j alpha(i, j) * mean_i^j + beta, i < segments, 1 <= j <= degree.
struct PeakRegressionModel {
    int segments = 1;
    int degree = 1;
    std::vector<double> alpha;  // segments x degree, row-major; alpha[i * degree + (j - 1)]
    double beta = 0.0;
    RegressionDiagnostics diagnostics;

    double coefficient(int segment, int power) const;
    double evaluate(std::span<const double> means) const;

    bool operator==(const PeakRegressionModel&) const = default;
};

/// Least-squares fit of each day's peak-window maximum on its off-peak
/// segment means. Feature columns without variance get alpha = 0; any other
/// rank deficiency throws ErrorKind::degenerate_regression.
PeakRegressionModel fit_peak_regression(std::span<const LoadCurve> days, const PricingSignal& pricing,
                                        int segments, int degree);

nlohmann::json to_json(const PeakRegressionModel& model);
PeakRegressionModel regression_from_json(const nlohmann::json& j);

enum class ObjectiveMode { offline, online };
enum class SlotSource { predicted, capped, realized };

/// Inputs an objective curve is rebuilt from during the day.
struct ObjectiveBasis {
    LoadCurve predicted;
    PeakRegressionModel model;
    double l_min = 0.0;       // kW; compared against the sum of off-peak segment means
    LoadCurve previous_day;   // realized consumption of the day before

    bool operator==(const ObjectiveBasis&) const = default;
};

struct ObjectiveCurve {
    LoadCurve values;
    ObjectiveMode mode = ObjectiveMode::offline;
    std::array<SlotSource, kSlotsPerDay> provenance{};
    bool cap_active = false;      // reference off-peak usage below l_min
    double permitted_max = 0.0;   // regression output at the reference segment means
    int realized_slots = 0;       // leading slots frozen to observations
    PricingSignal pricing;
    ObjectiveBasis basis;
};

/// Day-ahead objective. Throws ErrorKind::parameter if l_min <= 0.
ObjectiveCurve build_objective(const LoadCurve& predicted, const PricingSignal& pricing,
                               const PeakRegressionModel& model, double l_min, const LoadCurve& previous_day);

/// Rebuild at `slot_now` (1-based): slots before it take `realized`, later
/// slots share the forecast energy not yet consumed under `latest_pricing`.
/// `realized` must hold exactly slot_now - 1 values.
ObjectiveCurve update_online(const ObjectiveCurve& current, std::span<const double> realized,
                             const PricingSignal& latest_pricing, int slot_now);

}  // namespace drm::objective
