#include "drm/error.hpp"
#include "drm/objective.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace drm::objective {

std::vector<std::vector<int>> offpeak_segments(const PricingSignal& pricing, int segments) {
    if (segments < 1) throw Error(ErrorKind::parameter, "segment count must be >= 1");
    std::vector<int> offpeak;
    for (int t = 0; t < kSlotsPerDay; ++t)
        if (!pricing.is_peak(t)) offpeak.push_back(t);
    if (static_cast<int>(offpeak.size()) < segments)
        throw Error(ErrorKind::parameter, "only " + std::to_string(offpeak.size()) + " off-peak slots for " +
                                              std::to_string(segments) + " segments");
    std::vector<std::vector<int>> out(static_cast<std::size_t>(segments));
    const std::size_t base = offpeak.size() / static_cast<std::size_t>(segments);
    const std::size_t extra = offpeak.size() % static_cast<std::size_t>(segments);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t len = base + (i < extra ? 1 : 0);
        out[i].assign(offpeak.begin() + static_cast<std::ptrdiff_t>(pos),
                      offpeak.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return out;
}

std::vector<double> segment_means(const LoadCurve& curve, const std::vector<std::vector<int>>& segments) {
    std::vector<double> means;
    means.reserve(segments.size());
    for (const auto& seg : segments) {
        double s = 0.0;
        for (int t : seg) s += curve[t];
        means.push_back(seg.empty() ? 0.0 : s / static_cast<double>(seg.size()));
    }
    return means;
}

double PeakRegressionModel::coefficient(int segment, int power) const {
    if (segment < 0 || segment >= segments || power < 1 || power > degree)
        throw Error(ErrorKind::parameter, "regression coefficient index out of range");
    return alpha[static_cast<std::size_t>(segment * degree + power - 1)];
}

double PeakRegressionModel::evaluate(std::span<const double> means) const {
    if (means.size() != static_cast<std::size_t>(segments))
        throw Error(ErrorKind::shape, "regression expects " + std::to_string(segments) + " segment means");
    double v = beta;
    for (int i = 0; i < segments; ++i) {
        double power = 1.0;
        for (int j = 1; j <= degree; ++j) {
            power *= means[static_cast<std::size_t>(i)];
            v += alpha[static_cast<std::size_t>(i * degree + j - 1)] * power;
        }
    }
    return v;
}

PeakRegressionModel fit_peak_regression(std::span<const LoadCurve> days, const PricingSignal& pricing,
                                        int segments, int degree) {
    if (degree < 1) throw Error(ErrorKind::parameter, "regression degree must be >= 1");
    if (pricing.peak_windows.empty()) throw Error(ErrorKind::parameter, "peak regression needs peak windows");
    const auto segs = offpeak_segments(pricing, segments);
    const int k = segments * degree;
    const auto n = static_cast<Eigen::Index>(days.size());
    if (n < k + 1)
        throw Error(ErrorKind::degenerate_regression, "need at least " + std::to_string(k + 1) +
                                                          " days of history for " + std::to_string(segments) + "x" +
                                                          std::to_string(degree) + " coefficients, got " +
                                                          std::to_string(n) + "; use smaller segments*degree");
    const auto peak = pricing.peak_mask();

    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    for (Eigen::Index d = 0; d < n; ++d) {
        const auto& curve = days[static_cast<std::size_t>(d)];
        const auto means = segment_means(curve, segs);
        for (int i = 0; i < segments; ++i) {
            double power = 1.0;
            for (int j = 1; j <= degree; ++j) {
                power *= means[static_cast<std::size_t>(i)];
                x(d, i * degree + j - 1) = power;
            }
        }
        double m = 0.0;
        for (int t = 0; t < kSlotsPerDay; ++t)
            if (peak[static_cast<std::size_t>(t)]) m = std::max(m, curve[t]);
        y[d] = m;
    }

    // Centre the columns; those with no spread carry no information and are
    // pinned to zero instead of aliasing the intercept.
    const Eigen::RowVectorXd col_mean = x.colwise().mean();
    const double y_mean = y.mean();
    Eigen::MatrixXd xc = x.rowwise() - col_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;
    std::vector<Eigen::Index> active;
    for (Eigen::Index c = 0; c < k; ++c) {
        const double tol = 1e-12 * std::sqrt(static_cast<double>(n)) * std::max(1.0, std::abs(col_mean[c]));
        if (xc.col(c).norm() > tol) active.push_back(c);
    }

    PeakRegressionModel model;
    model.segments = segments;
    model.degree = degree;
    model.alpha.assign(static_cast<std::size_t>(k), 0.0);
    if (!active.empty()) {
        Eigen::MatrixXd xa(n, static_cast<Eigen::Index>(active.size()));
        for (std::size_t a = 0; a < active.size(); ++a) xa.col(static_cast<Eigen::Index>(a)) = xc.col(active[a]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xa);
        qr.setThreshold(1e-10);
        if (qr.rank() < xa.cols())
            throw Error(ErrorKind::degenerate_regression,
                        "off-peak features are collinear (rank " + std::to_string(qr.rank()) + " of " +
                            std::to_string(xa.cols()) + "); use smaller segments*degree");
        const Eigen::VectorXd coef = qr.solve(yc);
        for (std::size_t a = 0; a < active.size(); ++a)
            model.alpha[static_cast<std::size_t>(active[a])] = coef[static_cast<Eigen::Index>(a)];
    }
    model.beta = y_mean;
    for (Eigen::Index c = 0; c < k; ++c) model.beta -= model.alpha[static_cast<std::size_t>(c)] * col_mean[c];

    double rss = 0.0;
    for (Eigen::Index d = 0; d < n; ++d) {
        double fit = model.beta;
        for (Eigen::Index c = 0; c < k; ++c) fit += model.alpha[static_cast<std::size_t>(c)] * x(d, c);
        rss += (y[d] - fit) * (y[d] - fit);
    }
    model.diagnostics.days = static_cast<int>(n);
    model.diagnostics.rss = rss;
    model.diagnostics.rss_intercept_only = yc.squaredNorm();
    model.diagnostics.r_squared =
        model.diagnostics.rss_intercept_only > 0.0 ? 1.0 - rss / model.diagnostics.rss_intercept_only : 1.0;
    return model;
}

nlohmann::json to_json(const PeakRegressionModel& model) {
    nlohmann::json alpha = nlohmann::json::array();
    for (int i = 0; i < model.segments; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 1; j <= model.degree; ++j) row.push_back(model.coefficient(i, j));
        alpha.push_back(std::move(row));
    }
    return {
        {"format", "drm-peak-regression/1"},
        {"segments", model.segments},
        {"degree", model.degree},
        {"alpha", std::move(alpha)},
        {"beta", model.beta},
        {"diagnostics",
         {{"days", model.diagnostics.days},
          {"rss", model.diagnostics.rss},
          {"rss_intercept_only", model.diagnostics.rss_intercept_only},
          {"r_squared", model.diagnostics.r_squared}}},
    };
}

PeakRegressionModel regression_from_json(const nlohmann::json& j) {
    try {
        PeakRegressionModel m;
        m.segments = j.at("segments").get<int>();
        m.degree = j.at("degree").get<int>();
        if (m.segments < 1 || m.degree < 1) throw Error(ErrorKind::format, "regression dimensions must be >= 1");
        const auto rows = j.at("alpha").get<std::vector<std::vector<double>>>();
        if (rows.size() != static_cast<std::size_t>(m.segments))
            throw Error(ErrorKind::format, "alpha must have one row per segment");
        for (const auto& row : rows) {
            if (row.size() != static_cast<std::size_t>(m.degree))
                throw Error(ErrorKind::format, "alpha rows must have one entry per degree");
            for (double v : row)
                if (!std::isfinite(v)) throw Error(ErrorKind::format, "alpha entries must be finite");
            m.alpha.insert(m.alpha.end(), row.begin(), row.end());
        }
        m.beta = j.at("beta").get<double>();
        const auto& d = j.at("diagnostics");
        m.diagnostics = {d.at("days").get<int>(), d.at("rss").get<double>(), d.at("rss_intercept_only").get<double>(),
                         d.at("r_squared").get<double>()};
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, std::string("malformed regression JSON: ") + e.what());
    }
}

}  // namespace drm::objective
