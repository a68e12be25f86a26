#pragma once

// Nonlinear autoregressive (NAR) forecasting: a one-hidden-layer network maps
// the last `input_size` values of a series to the next value. Training uses
// Levenberg-Marquardt on the flattened parameter vector; day-ahead curves
// come from closed-loop rollout.

#include "drm/core.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace drm::forecast {

/// Feed-forward net: tanh hidden layer, identity output.
///
/// Parameters are stored flat as
///   [ W_ih (hidden x input, row-major) | b_h (hidden) | w_ho (hidden) | b_o ].
class NarNetwork {
public:
    NarNetwork(int input_size, int hidden_size);

    /// Uniform in [-0.5, 0.5] / sqrt(fan-in), seeded.
    static NarNetwork random(int input_size, int hidden_size, std::uint64_t seed);

    int input_size() const { return input_size_; }
    int hidden_size() const { return hidden_size_; }
    static std::size_t parameter_count(int input_size, int hidden_size);
    std::size_t parameter_count() const { return params_.size(); }

    std::span<const double> parameters() const { return params_; }
    void set_parameters(std::span<const double> params);

    double input_weight(int hidden, int input) const;
    double hidden_bias(int hidden) const;
    double output_weight(int hidden) const;
    double output_bias() const;

    /// Throws ErrorKind::shape when the window length is not input_size().
    double forward(std::span<const double> window) const;

    /// Output plus d(output)/d(parameters) written into `gradient`.
    double forward_with_gradient(std::span<const double> window, std::span<double> gradient) const;

    bool operator==(const NarNetwork&) const = default;

private:
    int input_size_;
    int hidden_size_;
    std::vector<double> params_;
};

/// Affine map of [min, max] onto [-1, 1]. A degenerate range maps every
/// value to 0 and back to `min`.
struct Scaling {
    double min = -1.0;
    double max = 1.0;

    static Scaling fit(std::span<const double> values);
    double half_range() const { return 0.5 * (max - min); }
    double to_unit(double x) const;
    double from_unit(double u) const;

    bool operator==(const Scaling&) const = default;
};

struct TrainingConfig {
    int input_size = 24;   // lag window length t_d
    int hidden_size = 10;
    int max_epochs = 100;
    double lm_initial_damping = 1e-3;
    double lm_damping_up = 10.0;
    double lm_damping_down = 0.1;
    double lm_damping_max = 1e10;
    int stop_patience = 6;
    double min_relative_improvement = 1e-6;
    double validation_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t rng_seed = 1;
    std::optional<std::array<double, 12>> monthly_weights;  // January first

    double train_fraction() const { return 1.0 - validation_fraction - test_fraction; }
    void validate() const;

    bool operator==(const TrainingConfig&) const = default;
};

struct Sample {
    std::chrono::sys_seconds time;
    double value = 0.0;

    bool operator==(const Sample&) const = default;
};

/// Time-ordered series viewed as supervised pairs: pair i predicts sample
/// `lag + i` from samples [i, i + lag).
class SeriesDataset {
public:
    SeriesDataset(std::vector<Sample> samples, int lag);

    /// Hourly series from half-hour daily curves (each hour = mean of its two slots).
    static SeriesDataset hourly_from_days(std::span<const DailyCurve> days, int lag);

    int lag() const { return lag_; }
    std::size_t sample_count() const { return samples_.size(); }
    std::size_t pair_count() const { return samples_.size() > static_cast<std::size_t>(lag_) ? samples_.size() - lag_ : 0; }
    const std::vector<Sample>& samples() const { return samples_; }
    std::vector<double> values() const;

    std::span<const double> window(std::size_t pair) const;
    double target(std::size_t pair) const;
    /// Sample index the pair predicts.
    std::size_t target_index(std::size_t pair) const { return pair + lag_; }

private:
    std::vector<Sample> samples_;
    std::vector<double> values_;
    int lag_;
};

/// Partition of sample indices. Training is the contiguous leading block;
/// validation and test are drawn at random from the rest. Every supervised
/// pair belongs to the partition holding its target sample.
struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

DatasetSplit split_dataset(const SeriesDataset& ds, const TrainingConfig& cfg);

/// Pair indices whose target sample lies in `sample_indices` (ascending).
std::vector<std::size_t> pairs_for(const SeriesDataset& ds, std::span<const std::size_t> sample_indices);

/// Supervised pairs already mapped to unit scale.
struct PairSet {
    int lag = 0;
    std::vector<double> windows;  // row-major, size() x lag
    std::vector<double> targets;
    std::vector<double> weights;  // per-pair residual weights, all > 0
    double target_scale = 1.0;    // unit -> original units, for reporting MSE

    std::size_t size() const { return targets.size(); }
    std::span<const double> window(std::size_t i) const {
        return {windows.data() + i * static_cast<std::size_t>(lag), static_cast<std::size_t>(lag)};
    }
};

PairSet make_pair_set(const SeriesDataset& ds, std::span<const std::size_t> pair_indices,
                      const Scaling& scaling, const TrainingConfig& cfg);

/// Weighted MSE in original units.
double mse(const NarNetwork& net, const PairSet& pairs);

/// Jacobian of the weighted residuals sqrt(w) * (target - output) with
/// respect to the flattened parameters; one row per pair.
Eigen::MatrixXd residual_jacobian(const NarNetwork& net, const PairSet& pairs);
Eigen::VectorXd residuals(const NarNetwork& net, const PairSet& pairs);

/// Damped Gauss-Newton step: solves (J^T J + damping I) delta = -J^T r.
/// Returns nullopt if the system cannot be factored or yields non-finite values.
std::optional<Eigen::VectorXd> lm_step(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& residual,
                                       double damping);

enum class StopReason { perfect_fit, validation_stall, max_epochs, damping_limit };

std::string_view to_string(StopReason r);

struct EpochRecord {
    int epoch = 0;
    double train_mse = 0.0;
    double validation_mse = 0.0;
    double damping = 0.0;
};

struct LmResult {
    NarNetwork network;           // best-validation parameters
    std::vector<EpochRecord> trace;  // entry 0 is the initial state
    int best_epoch = 0;
    StopReason stop_reason = StopReason::max_epochs;
};

LmResult train_lm(NarNetwork initial, const PairSet& train, const PairSet& validation,
                  const TrainingConfig& cfg);

/// Trained network together with the scaling it was trained under.
struct NarModel {
    NarNetwork network{1, 1};
    Scaling scaling;
    TrainingConfig config;

    /// One-step prediction from a raw (unscaled) lag window.
    double predict_next(std::span<const double> raw_window) const;

    bool operator==(const NarModel&) const = default;
};

struct ForecastFit {
    NarModel model;
    DatasetSplit split;
    std::vector<EpochRecord> trace;
    int best_epoch = 0;
    StopReason stop_reason = StopReason::max_epochs;
    double test_mse = 0.0;
    double persistence_test_mse = 0.0;  // predict-last-value baseline
    std::vector<double> test_residuals;  // target - prediction, original units
};

/// Full protocol: split, scale from the training block, seeded init, LM.
ForecastFit fit_forecaster(const SeriesDataset& ds, const TrainingConfig& cfg);

/// Closed-loop rollout of `steps` values after `history`; predictions are
/// clamped at 0 and fed back into the lag window.
std::vector<double> forecast_series(const NarModel& model, std::span<const double> history, int steps);

/// 24 hourly values -> 48 half-hour slots by linear interpolation between
/// hour midpoints, held constant beyond the first and last midpoint.
LoadCurve hourly_to_slots(std::span<const double> hourly);

/// Day-ahead 48-slot curve from an hourly history ending at the day boundary.
LoadCurve predict_day(const NarModel& model, std::span<const double> hourly_history);

struct Autocorrelation {
    std::vector<double> r;  // r[0] == 1
    double bound = 0.0;     // 1.96 / sqrt(N)

    /// Share of lags 1..r.size()-1 inside +-bound.
    double fraction_within_bound() const;
};

/// Normalized autocorrelation of mean-removed residuals for lags 0..max_lag.
Autocorrelation error_autocorrelation(std::span<const double> residuals, int max_lag = 20);

nlohmann::json to_json(const NarModel& model);
/// Throws ErrorKind::format if layer sizes and parameter counts disagree.
NarModel model_from_json(const nlohmann::json& j);

}  // namespace drm::forecast
