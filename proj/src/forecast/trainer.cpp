#include "drm/error.hpp"
#include "drm/forecast.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numeric>

namespace drm::forecast {

namespace {

double weight_sum(const PairSet& pairs) {
    return std::accumulate(pairs.weights.begin(), pairs.weights.end(), 0.0);
}

double weighted_sse(const NarNetwork& net, const PairSet& pairs) {
    double sse = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double e = pairs.targets[i] - net.forward(pairs.window(i));
        sse += pairs.weights[i] * e * e;
    }
    return sse;
}

double to_mse(double sse, const PairSet& pairs) {
    return sse / weight_sum(pairs) * pairs.target_scale * pairs.target_scale;
}

/// Transposed residual Jacobian (parameters x pairs) and residual vector.
/// Column layout keeps each pair's gradient contiguous.
void linearize(const NarNetwork& net, const PairSet& pairs, Eigen::MatrixXd& jt, Eigen::VectorXd& r) {
    const auto n = static_cast<Eigen::Index>(pairs.size());
    const auto p = static_cast<Eigen::Index>(net.parameter_count());
    jt.resize(p, n);
    r.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        std::span<double> col(jt.col(i).data(), static_cast<std::size_t>(p));
        const double out = net.forward_with_gradient(pairs.window(k), col);
        const double sw = std::sqrt(pairs.weights[k]);
        r[i] = sw * (pairs.targets[k] - out);
        jt.col(i) *= -sw;
    }
}

std::optional<Eigen::VectorXd> solve_damped(const Eigen::MatrixXd& normal_lower, const Eigen::VectorXd& gradient,
                                            double damping) {
    Eigen::MatrixXd m = normal_lower;
    m.diagonal().array() += damping;
    Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(m);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return std::nullopt;
    Eigen::VectorXd delta = -ldlt.solve(gradient);
    if (!delta.allFinite()) return std::nullopt;
    return delta;
}

}  // namespace

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::perfect_fit: return "perfect_fit";
        case StopReason::validation_stall: return "validation_stall";
        case StopReason::max_epochs: return "max_epochs";
        case StopReason::damping_limit: return "damping_limit";
    }
    return "unknown";
}

double mse(const NarNetwork& net, const PairSet& pairs) {
    if (pairs.size() == 0) throw Error(ErrorKind::dataset_too_small, "MSE of an empty pair set");
    return to_mse(weighted_sse(net, pairs), pairs);
}

Eigen::MatrixXd residual_jacobian(const NarNetwork& net, const PairSet& pairs) {
    Eigen::MatrixXd jt;
    Eigen::VectorXd r;
    linearize(net, pairs, jt, r);
    return jt.transpose();
}

Eigen::VectorXd residuals(const NarNetwork& net, const PairSet& pairs) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i)
        r[static_cast<Eigen::Index>(i)] =
            std::sqrt(pairs.weights[i]) * (pairs.targets[i] - net.forward(pairs.window(i)));
    return r;
}

std::optional<Eigen::VectorXd> lm_step(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& residual,
                                       double damping) {
    if (jacobian.rows() != residual.size()) throw Error(ErrorKind::shape, "Jacobian rows must match residuals");
    Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(jacobian.cols(), jacobian.cols());
    normal.selfadjointView<Eigen::Lower>().rankUpdate(jacobian.transpose());
    return solve_damped(normal, jacobian.transpose() * residual, damping);
}

LmResult train_lm(NarNetwork initial, const PairSet& train, const PairSet& validation, const TrainingConfig& cfg) {
    cfg.validate();
    if (train.size() == 0 || validation.size() == 0)
        throw Error(ErrorKind::dataset_too_small, "training needs non-empty training and validation pairs");
    if (train.lag != initial.input_size() || validation.lag != initial.input_size())
        throw Error(ErrorKind::shape, "pair windows do not match the network input size");

    LmResult result{initial, {}, 0, StopReason::max_epochs};
    NarNetwork current = std::move(initial);

    Eigen::MatrixXd jt;
    Eigen::VectorXd r;
    linearize(current, train, jt, r);
    double sse = weighted_sse(current, train);
    double damping = cfg.lm_initial_damping;

    double best_val = mse(current, validation);
    result.trace.push_back({0, to_mse(sse, train), best_val, damping});
    if (to_mse(sse, train) == 0.0) {
        result.stop_reason = StopReason::perfect_fit;
        return result;
    }

    const auto p = static_cast<Eigen::Index>(current.parameter_count());
    Eigen::MatrixXd normal(p, p);
    NarNetwork trial = current;
    std::vector<double> trial_params(current.parameter_count());
    bool ever_solved = false;
    int stalled = 0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        normal.setZero();
        normal.selfadjointView<Eigen::Lower>().rankUpdate(jt);
        const Eigen::VectorXd gradient = jt * r;

        bool accepted = false;
        double trial_sse = sse;
        while (damping <= cfg.lm_damping_max) {
            if (auto delta = solve_damped(normal, gradient, damping)) {
                ever_solved = true;
                const auto params = current.parameters();
                bool finite = true;
                for (std::size_t k = 0; k < params.size(); ++k) {
                    trial_params[k] = params[k] + (*delta)[static_cast<Eigen::Index>(k)];
                    finite = finite && std::isfinite(trial_params[k]);
                }
                if (finite) {
                    trial.set_parameters(trial_params);
                    trial_sse = weighted_sse(trial, train);
                }
                if (finite && trial_sse < sse) {
                    accepted = true;
                    damping = std::max(damping * cfg.lm_damping_down, 1e-300);
                    break;
                }
            }
            damping *= cfg.lm_damping_up;
        }
        if (!accepted) {
            if (!ever_solved) {
                std::string msg = "damped normal equations stayed singular up to damping " +
                                  std::to_string(cfg.lm_damping_max) + "; MSE trace:";
                for (const auto& e : result.trace) msg += " " + std::to_string(e.train_mse);
                throw Error(ErrorKind::training_failed, msg);
            }
            result.stop_reason = StopReason::damping_limit;
            break;
        }

        current = trial;
        linearize(current, train, jt, r);
        sse = trial_sse;
        const double val = mse(current, validation);
        result.trace.push_back({epoch, to_mse(sse, train), val, damping});

        const bool significant = best_val > 0.0 && (best_val - val) >= cfg.min_relative_improvement * best_val;
        if (val < best_val) {
            best_val = val;
            result.network = current;
            result.best_epoch = epoch;
        }
        stalled = significant ? 0 : stalled + 1;
        if (to_mse(sse, train) == 0.0) {
            result.network = current;
            result.best_epoch = epoch;
            result.stop_reason = StopReason::perfect_fit;
            break;
        }
        if (stalled >= cfg.stop_patience) {
            result.stop_reason = StopReason::validation_stall;
            break;
        }
    }
    return result;
}

ForecastFit fit_forecaster(const SeriesDataset& ds, const TrainingConfig& cfg) {
    cfg.validate();
    if (ds.lag() != cfg.input_size)
        throw Error(ErrorKind::parameter, "dataset lag " + std::to_string(ds.lag()) + " differs from input_size " +
                                              std::to_string(cfg.input_size));
    ForecastFit fit;
    fit.split = split_dataset(ds, cfg);

    const auto values = ds.values();
    std::vector<double> train_values;
    train_values.reserve(fit.split.train.size());
    for (std::size_t i : fit.split.train) train_values.push_back(values[i]);
    const Scaling scaling = Scaling::fit(train_values);

    const auto train_pairs = pairs_for(ds, fit.split.train);
    const auto val_pairs = pairs_for(ds, fit.split.validation);
    const auto test_pairs = pairs_for(ds, fit.split.test);
    if (train_pairs.empty() || val_pairs.empty() || test_pairs.empty())
        throw Error(ErrorKind::dataset_too_small, "series too short for a " + std::to_string(cfg.input_size) +
                                                      "-lag window in every partition");

    const PairSet train = make_pair_set(ds, train_pairs, scaling, cfg);
    const PairSet validation = make_pair_set(ds, val_pairs, scaling, cfg);

    LmResult lm = train_lm(NarNetwork::random(cfg.input_size, cfg.hidden_size, cfg.rng_seed), train, validation, cfg);
    fit.model = NarModel{std::move(lm.network), scaling, cfg};
    fit.trace = std::move(lm.trace);
    fit.best_epoch = lm.best_epoch;
    fit.stop_reason = lm.stop_reason;

    double sse = 0.0, persistence = 0.0;
    for (std::size_t p : test_pairs) {
        const auto w = ds.window(p);
        const double e = ds.target(p) - fit.model.predict_next(w);
        fit.test_residuals.push_back(e);
        sse += e * e;
        const double ep = ds.target(p) - w.back();
        persistence += ep * ep;
    }
    fit.test_mse = sse / static_cast<double>(test_pairs.size());
    fit.persistence_test_mse = persistence / static_cast<double>(test_pairs.size());
    return fit;
}

}  // namespace drm::forecast
