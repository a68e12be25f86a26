#include "drm/error.hpp"
#include "drm/forecast.hpp"
#include "drm/rng.hpp"

#include <cmath>

namespace drm::forecast {

NarNetwork::NarNetwork(int input_size, int hidden_size)
    : input_size_(input_size), hidden_size_(hidden_size) {
    if (input_size < 1 || hidden_size < 1)
        throw Error(ErrorKind::parameter, "network layer sizes must be >= 1");
    params_.assign(parameter_count(input_size, hidden_size), 0.0);
}

std::size_t NarNetwork::parameter_count(int input_size, int hidden_size) {
    const auto in = static_cast<std::size_t>(input_size);
    const auto hid = static_cast<std::size_t>(hidden_size);
    return hid * in + hid + hid + 1;
}

NarNetwork NarNetwork::random(int input_size, int hidden_size, std::uint64_t seed) {
    NarNetwork net(input_size, hidden_size);
    Rng rng(seed);
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(input_size));
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden_size));
    const std::size_t hidden_end = static_cast<std::size_t>(hidden_size) * (input_size + 1);
    for (std::size_t k = 0; k < net.params_.size(); ++k) {
        const double scale = k < hidden_end ? in_scale : out_scale;
        net.params_[k] = rng.uniform(-0.5, 0.5) * scale;
    }
    return net;
}

void NarNetwork::set_parameters(std::span<const double> params) {
    if (params.size() != params_.size())
        throw Error(ErrorKind::shape, "expected " + std::to_string(params_.size()) + " parameters, got " +
                                          std::to_string(params.size()));
    for (double p : params)
        if (!std::isfinite(p)) throw Error(ErrorKind::parameter, "non-finite network parameter");
    params_.assign(params.begin(), params.end());
}

double NarNetwork::input_weight(int hidden, int input) const {
    return params_[static_cast<std::size_t>(hidden) * input_size_ + input];
}

double NarNetwork::hidden_bias(int hidden) const {
    return params_[static_cast<std::size_t>(hidden_size_) * input_size_ + hidden];
}

double NarNetwork::output_weight(int hidden) const {
    return params_[static_cast<std::size_t>(hidden_size_) * (input_size_ + 1) + hidden];
}

double NarNetwork::output_bias() const { return params_.back(); }

double NarNetwork::forward(std::span<const double> window) const {
    if (window.size() != static_cast<std::size_t>(input_size_))
        throw Error(ErrorKind::shape, "window has " + std::to_string(window.size()) + " values, network expects " +
                                          std::to_string(input_size_));
    const std::size_t in = static_cast<std::size_t>(input_size_);
    const std::size_t hid = static_cast<std::size_t>(hidden_size_);
    const double* w = params_.data();
    const double* bias = w + hid * in;
    const double* w_out = bias + hid;
    double out = params_.back();
    for (std::size_t h = 0; h < hid; ++h) {
        double z = bias[h];
        const double* row = w + h * in;
        for (std::size_t i = 0; i < in; ++i) z += row[i] * window[i];
        out += w_out[h] * std::tanh(z);
    }
    return out;
}

double NarNetwork::forward_with_gradient(std::span<const double> window, std::span<double> gradient) const {
    if (window.size() != static_cast<std::size_t>(input_size_))
        throw Error(ErrorKind::shape, "window has " + std::to_string(window.size()) + " values, network expects " +
                                          std::to_string(input_size_));
    if (gradient.size() != params_.size()) throw Error(ErrorKind::shape, "gradient buffer has wrong size");
    const std::size_t in = static_cast<std::size_t>(input_size_);
    const std::size_t hid = static_cast<std::size_t>(hidden_size_);
    const double* w = params_.data();
    const double* bias = w + hid * in;
    const double* w_out = bias + hid;
    double* g_w = gradient.data();
    double* g_bias = g_w + hid * in;
    double* g_out = g_bias + hid;
    double out = params_.back();
    for (std::size_t h = 0; h < hid; ++h) {
        double z = bias[h];
        const double* row = w + h * in;
        for (std::size_t i = 0; i < in; ++i) z += row[i] * window[i];
        const double a = std::tanh(z);
        out += w_out[h] * a;
        const double dz = w_out[h] * (1.0 - a * a);
        double* g_row = g_w + h * in;
        for (std::size_t i = 0; i < in; ++i) g_row[i] = dz * window[i];
        g_bias[h] = dz;
        g_out[h] = a;
    }
    gradient.back() = 1.0;
    return out;
}

// ---------------------------------------------------------------------------

Scaling Scaling::fit(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::dataset_too_small, "cannot fit scaling to an empty series");
    Scaling s{values[0], values[0]};
    for (double v : values) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    return s;
}

double Scaling::to_unit(double x) const {
    if (!(max > min)) return 0.0;
    return 2.0 * (x - min) / (max - min) - 1.0;
}

double Scaling::from_unit(double u) const {
    if (!(max > min)) return min;
    return min + (u + 1.0) * 0.5 * (max - min);
}

double NarModel::predict_next(std::span<const double> raw_window) const {
    std::vector<double> unit(raw_window.size());
    for (std::size_t i = 0; i < unit.size(); ++i) unit[i] = scaling.to_unit(raw_window[i]);
    return scaling.from_unit(network.forward(unit));
}

}  // namespace drm::forecast
