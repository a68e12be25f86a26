#include "drm/error.hpp"
#include "drm/forecast.hpp"

#include <algorithm>
#include <cmath>

namespace drm::forecast {

std::vector<double> forecast_series(const NarModel& model, std::span<const double> history, int steps) {
    const auto lag = static_cast<std::size_t>(model.network.input_size());
    if (history.size() < lag)
        throw Error(ErrorKind::dataset_too_small, "forecast needs " + std::to_string(lag) + " history values, got " +
                                                      std::to_string(history.size()));
    if (steps < 0) throw Error(ErrorKind::parameter, "forecast steps must be >= 0");
    std::vector<double> window(history.end() - static_cast<std::ptrdiff_t>(lag), history.end());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        double y = model.predict_next(window);
        if (!std::isfinite(y)) throw Error(ErrorKind::training_failed, "model produced a non-finite forecast");
        y = std::max(0.0, y);
        out.push_back(y);
        std::rotate(window.begin(), window.begin() + 1, window.end());
        window.back() = y;
    }
    return out;
}

LoadCurve hourly_to_slots(std::span<const double> hourly) {
    if (hourly.size() != 24) throw Error(ErrorKind::shape, "expected 24 hourly values");
    SlotValues slots{};
    for (int j = 0; j < kSlotsPerDay; ++j) {
        // slot midpoint and hour midpoints, both in hours since midnight
        const double t = kSlotHours * j + 0.5 * kSlotHours;
        double v;
        if (t <= 0.5) {
            v = hourly.front();
        } else if (t >= 23.5) {
            v = hourly.back();
        } else {
            const auto k = static_cast<std::size_t>(std::floor(t - 0.5));
            const double frac = t - 0.5 - static_cast<double>(k);
            v = hourly[k] * (1.0 - frac) + hourly[k + 1] * frac;
        }
        slots[static_cast<std::size_t>(j)] = std::max(0.0, v);
    }
    return LoadCurve(slots);
}

LoadCurve predict_day(const NarModel& model, std::span<const double> hourly_history) {
    return hourly_to_slots(forecast_series(model, hourly_history, 24));
}

// ---------------------------------------------------------------------------

double Autocorrelation::fraction_within_bound() const {
    if (r.size() < 2) return 1.0;
    std::size_t inside = 0;
    for (std::size_t k = 1; k < r.size(); ++k)
        if (std::abs(r[k]) <= bound) ++inside;
    return static_cast<double>(inside) / static_cast<double>(r.size() - 1);
}

Autocorrelation error_autocorrelation(std::span<const double> residuals, int max_lag) {
    const std::size_t n = residuals.size();
    if (n < 20) throw Error(ErrorKind::dataset_too_small, "autocorrelation needs at least 20 residuals");
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n)
        throw Error(ErrorKind::parameter, "max_lag must lie in [0, N)");

    double mean = 0.0;
    double scale = 0.0;
    for (double e : residuals) {
        mean += e;
        scale = std::max(scale, std::abs(e));
    }
    mean /= static_cast<double>(n);
    std::vector<double> c(n);
    double denom = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        c[t] = residuals[t] - mean;
        denom += c[t] * c[t];
    }
    const double floor = static_cast<double>(n) * std::pow(1e-12 * std::max(1.0, scale), 2);
    if (!(denom > floor)) throw Error(ErrorKind::undefined_metric, "residuals have zero variance");

    Autocorrelation ac;
    ac.bound = 1.96 / std::sqrt(static_cast<double>(n));
    ac.r.resize(static_cast<std::size_t>(max_lag) + 1);
    ac.r[0] = 1.0;
    for (std::size_t k = 1; k < ac.r.size(); ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += c[t] * c[t + k];
        ac.r[k] = s / denom;
    }
    return ac;
}

}  // namespace drm::forecast
