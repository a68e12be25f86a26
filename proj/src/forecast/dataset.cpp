#include "drm/error.hpp"
#include "drm/forecast.hpp"
#include "drm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace drm::forecast {

void TrainingConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::config, "training config: " + what); };
    if (input_size < 1) fail("input_size must be >= 1");
    if (hidden_size < 1) fail("hidden_size must be >= 1");
    if (max_epochs < 0) fail("max_epochs must be >= 0");
    if (!(lm_initial_damping > 0.0)) fail("initial damping must be > 0");
    if (!(lm_damping_up > 1.0)) fail("damping increase factor must be > 1");
    if (!(lm_damping_down > 0.0 && lm_damping_down < 1.0)) fail("damping decrease factor must lie in (0, 1)");
    if (!(lm_damping_max > lm_initial_damping)) fail("damping cap must exceed the initial damping");
    if (stop_patience < 1) fail("stop_patience must be >= 1");
    if (!(min_relative_improvement >= 0.0)) fail("min_relative_improvement must be >= 0");
    if (!(validation_fraction > 0.0 && test_fraction > 0.0 && train_fraction() > 0.0))
        fail("train/validation/test fractions must all be positive and sum to 1");
    if (monthly_weights)
        for (double w : *monthly_weights)
            if (!(w > 0.0) || !std::isfinite(w)) fail("monthly weights must be finite and > 0");
}

SeriesDataset::SeriesDataset(std::vector<Sample> samples, int lag) : samples_(std::move(samples)), lag_(lag) {
    if (lag < 1) throw Error(ErrorKind::parameter, "lag must be >= 1");
    values_.reserve(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i].value))
            throw Error(ErrorKind::format, "series sample " + std::to_string(i) + " is not finite");
        if (i > 0 && !(samples_[i - 1].time < samples_[i].time))
            throw Error(ErrorKind::format, "series timestamps must be strictly increasing");
        values_.push_back(samples_[i].value);
    }
}

SeriesDataset SeriesDataset::hourly_from_days(std::span<const DailyCurve> days, int lag) {
    std::vector<Sample> samples;
    samples.reserve(days.size() * 24);
    for (const auto& day : days) {
        const std::chrono::sys_days midnight{day.date};
        for (int h = 0; h < 24; ++h) {
            const double v = 0.5 * (day.curve[2 * h] + day.curve[2 * h + 1]);
            samples.push_back({std::chrono::sys_seconds{midnight} + std::chrono::hours{h}, v});
        }
    }
    return SeriesDataset(std::move(samples), lag);
}

std::vector<double> SeriesDataset::values() const { return values_; }

std::span<const double> SeriesDataset::window(std::size_t pair) const {
    if (pair >= pair_count()) throw Error(ErrorKind::parameter, "pair index out of range");
    return {values_.data() + pair, static_cast<std::size_t>(lag_)};
}

double SeriesDataset::target(std::size_t pair) const {
    if (pair >= pair_count()) throw Error(ErrorKind::parameter, "pair index out of range");
    return values_[pair + static_cast<std::size_t>(lag_)];
}

DatasetSplit split_dataset(const SeriesDataset& ds, const TrainingConfig& cfg) {
    cfg.validate();
    const std::size_t n = ds.sample_count();
    if (n < static_cast<std::size_t>(ds.lag()) + 10)
        throw Error(ErrorKind::dataset_too_small, "series has " + std::to_string(n) + " samples, need at least " +
                                                      std::to_string(ds.lag() + 10));
    const auto n_val = static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(n)));
    const auto n_test = static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(n)));
    if (n_val + n_test >= n) throw Error(ErrorKind::dataset_too_small, "no samples left for training");
    const std::size_t n_train = n - n_val - n_test;

    DatasetSplit split;
    split.train.resize(n_train);
    std::iota(split.train.begin(), split.train.end(), std::size_t{0});

    std::vector<std::size_t> rest(n - n_train);
    std::iota(rest.begin(), rest.end(), n_train);
    Rng rng(cfg.rng_seed);
    for (std::size_t i = rest.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(rest[i - 1], rest[j]);
    }
    split.validation.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_val), rest.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::size_t> pairs_for(const SeriesDataset& ds, std::span<const std::size_t> sample_indices) {
    std::vector<std::size_t> pairs;
    const auto lag = static_cast<std::size_t>(ds.lag());
    for (std::size_t idx : sample_indices)
        if (idx >= lag && idx < ds.sample_count()) pairs.push_back(idx - lag);
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

PairSet make_pair_set(const SeriesDataset& ds, std::span<const std::size_t> pair_indices, const Scaling& scaling,
                      const TrainingConfig& cfg) {
    PairSet set;
    set.lag = ds.lag();
    set.target_scale = scaling.half_range();
    set.windows.reserve(pair_indices.size() * static_cast<std::size_t>(ds.lag()));
    for (std::size_t p : pair_indices) {
        for (double v : ds.window(p)) set.windows.push_back(scaling.to_unit(v));
        set.targets.push_back(scaling.to_unit(ds.target(p)));
        double w = 1.0;
        if (cfg.monthly_weights) {
            const auto& t = ds.samples()[ds.target_index(p)].time;
            const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(t)};
            w = (*cfg.monthly_weights)[static_cast<unsigned>(ymd.month()) - 1];
        }
        set.weights.push_back(w);
    }
    return set;
}

}  // namespace drm::forecast
