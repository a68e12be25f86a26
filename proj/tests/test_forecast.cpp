#include "drm/forecast.hpp"
#include "drm/rng.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

using namespace drm;
using namespace drm::forecast;
using drm::test::kind_of;

namespace {

SeriesDataset series(const std::vector<double>& values, int lag) {
    std::vector<Sample> s;
    const std::chrono::sys_seconds t0{std::chrono::sys_days{std::chrono::year{2023} / 1 / 1}};
    for (std::size_t i = 0; i < values.size(); ++i)
        s.push_back({t0 + std::chrono::hours{static_cast<long>(i)}, values[i]});
    return SeriesDataset(std::move(s), lag);
}

std::vector<double> ar1(double y0, double phi, std::size_t n) {
    std::vector<double> v{y0};
    while (v.size() < n) v.push_back(phi * v.back());
    return v;
}

PairSet random_pairs(Rng& rng, int lag, std::size_t n) {
    PairSet p;
    p.lag = lag;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < lag; ++k) p.windows.push_back(rng.uniform(-1, 1));
        p.targets.push_back(rng.uniform(-1, 1));
        p.weights.push_back(rng.uniform(0.5, 2.0));
    }
    return p;
}

// Hidden unit h at input x in [-1, 1] with tanh(eps*x) ~ eps*x: out = phi * x up to O(eps^2).
NarModel linear_model(double phi) {
    constexpr double eps = 1e-5;
    NarNetwork net(1, 1);
    net.set_parameters(std::vector<double>{eps, 0.0, phi / eps, 0.0});
    return NarModel{net, Scaling{-1.0, 1.0}, TrainingConfig{}};
}

}  // namespace

TEST_SUITE("forecast") {

TEST_CASE("8760 hourly samples split 6132/1314/1314") {
    const auto ds = series(std::vector<double>(8760, 1.0), 24);
    const auto split = split_dataset(ds, TrainingConfig{});
    CHECK(split.train.size() == 6132);
    CHECK(split.validation.size() == 1314);
    CHECK(split.test.size() == 1314);
    for (std::size_t i = 0; i < split.train.size(); ++i) CHECK(split.train[i] == i);
}

TEST_CASE("100 samples split 70/15/15") {
    const auto ds = series(std::vector<double>(100, 1.0), 1);
    const auto split = split_dataset(ds, TrainingConfig{});
    CHECK(split.train.size() == 70);
    CHECK(split.validation.size() == 15);
    CHECK(split.test.size() == 15);
}

TEST_CASE("partitions are a disjoint cover of samples and supervised pairs") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int lag = static_cast<int>(rng.uniform_int(1, 30));
        const auto n = static_cast<std::size_t>(rng.uniform_int(lag + 10, 3000));
        const auto ds = series(std::vector<double>(n, 0.5), lag);
        TrainingConfig cfg;
        cfg.rng_seed = rng.next_u64();
        const auto split = split_dataset(ds, cfg);

        std::set<std::size_t> seen;
        std::size_t total = 0;
        for (const auto* part : {&split.train, &split.validation, &split.test}) {
            total += part->size();
            seen.insert(part->begin(), part->end());
        }
        CHECK(total == n);
        CHECK(seen.size() == n);
        CHECK(*seen.rbegin() == n - 1);

        std::set<std::size_t> pairs;
        std::size_t pair_total = 0;
        for (const auto* part : {&split.train, &split.validation, &split.test}) {
            const auto p = pairs_for(ds, *part);
            pair_total += p.size();
            pairs.insert(p.begin(), p.end());
        }
        CHECK(pair_total == ds.pair_count());
        CHECK(pairs.size() == ds.pair_count());
    }
}

TEST_CASE("split is seeded") {
    const auto ds = series(std::vector<double>(500, 1.0), 24);
    TrainingConfig a, b;
    b.rng_seed = 99;
    CHECK(split_dataset(ds, a).validation == split_dataset(ds, a).validation);
    CHECK(split_dataset(ds, a).validation != split_dataset(ds, b).validation);
}

TEST_CASE("too few samples") {
    const auto ds = series(std::vector<double>(33, 1.0), 24);
    CHECK(kind_of([&] { split_dataset(ds, TrainingConfig{}); }) == ErrorKind::dataset_too_small);
}

TEST_CASE("pair count and windows") {
    const auto ds = series({1, 2, 3, 4, 5, 6}, 2);
    CHECK(ds.pair_count() == 4);
    CHECK(ds.window(1)[0] == 2);
    CHECK(ds.window(1)[1] == 3);
    CHECK(ds.target(1) == 4);
}

TEST_CASE("hourly series averages slot pairs") {
    SlotValues v{};
    for (int t = 0; t < kSlotsPerDay; ++t) v[static_cast<std::size_t>(t)] = t;
    const std::vector<DailyCurve> days = {{std::chrono::year{2023} / 3 / 1, LoadCurve(v)}};
    const auto ds = SeriesDataset::hourly_from_days(days, 3);
    REQUIRE(ds.sample_count() == 24);
    for (int h = 0; h < 24; ++h) CHECK(ds.values()[static_cast<std::size_t>(h)] == 2 * h + 0.5);
}

TEST_CASE("forward: zero net, bias pass-through, shape error") {
    NarNetwork zero(4, 3);
    CHECK(zero.forward(std::vector<double>{1, -2, 3, 9}) == 0.0);

    Rng rng(2);
    auto net = NarNetwork::random(4, 3, 7);
    std::vector<double> p(net.parameters().begin(), net.parameters().end());
    for (int h = 0; h < 3; ++h) p[4 * 3 + 3 + static_cast<std::size_t>(h)] = 0.0;
    p.back() = 0.37;
    net.set_parameters(p);
    for (int i = 0; i < 5; ++i)
        CHECK(net.forward(std::vector<double>{rng.uniform(-9, 9), rng.uniform(-9, 9), 0, 1}) == 0.37);

    CHECK(kind_of([&] { net.forward(std::vector<double>{1, 2, 3}); }) == ErrorKind::shape);
}

TEST_CASE("forward matches per-neuron hand evaluation") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const int in = static_cast<int>(rng.uniform_int(1, 6));
        const int hid = static_cast<int>(rng.uniform_int(1, 5));
        const auto net = NarNetwork::random(in, hid, rng.next_u64());
        std::vector<double> x(static_cast<std::size_t>(in));
        for (auto& v : x) v = rng.uniform(-1, 1);
        double out = net.output_bias();
        for (int h = 0; h < hid; ++h) {
            double z = net.hidden_bias(h);
            for (int i = 0; i < in; ++i) z += net.input_weight(h, i) * x[static_cast<std::size_t>(i)];
            out += net.output_weight(h) * std::tanh(z);
        }
        CHECK(net.forward(x) == doctest::Approx(out).epsilon(1e-14));
    }
}

TEST_CASE("initialization is seeded and bounded by 0.5 / sqrt(fan-in)") {
    const auto a = NarNetwork::random(24, 10, 5);
    CHECK(a == NarNetwork::random(24, 10, 5));
    CHECK_FALSE(a == NarNetwork::random(24, 10, 6));
    CHECK(a.parameter_count() == 24 * 10 + 10 + 10 + 1);
    for (int h = 0; h < 10; ++h) {
        for (int i = 0; i < 24; ++i) CHECK(std::abs(a.input_weight(h, i)) <= 0.5 / std::sqrt(24.0));
        CHECK(std::abs(a.output_weight(h)) <= 0.5 / std::sqrt(10.0));
    }
}

TEST_CASE("residual Jacobian matches central finite differences") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int in = static_cast<int>(rng.uniform_int(1, 5));
        const int hid = static_cast<int>(rng.uniform_int(1, 6));
        auto net = NarNetwork::random(in, hid, rng.next_u64());
        const auto pairs = random_pairs(rng, in, 15);
        const Eigen::MatrixXd j = residual_jacobian(net, pairs);
        std::vector<double> p(net.parameters().begin(), net.parameters().end());
        Eigen::MatrixXd fd(j.rows(), j.cols());
        constexpr double h = 1e-6;
        for (std::size_t k = 0; k < p.size(); ++k) {
            auto plus = p, minus = p;
            plus[k] += h;
            minus[k] -= h;
            net.set_parameters(plus);
            const Eigen::VectorXd rp = residuals(net, pairs);
            net.set_parameters(minus);
            const Eigen::VectorXd rm = residuals(net, pairs);
            fd.col(static_cast<Eigen::Index>(k)) = (rp - rm) / (2 * h);
        }
        net.set_parameters(p);
        CHECK((j - fd).norm() / fd.norm() < 1e-5);
    }
}

TEST_CASE("LM step on a two-parameter quadratic equals the damped normal-equation solution") {
    // r(p) = A p - b with three residuals; J = A.
    Eigen::MatrixXd a(3, 2);
    a << 1.0, 2.0, -0.5, 1.5, 3.0, 0.25;
    const Eigen::Vector2d p0(0.3, -0.7);
    const Eigen::Vector3d b(1.0, 2.0, -1.0);
    const Eigen::VectorXd r = a * p0 - b;
    for (double lambda : {0.0, 1e-3, 0.5, 10.0}) {
        // closed form 2x2 inverse of A^T A + lambda I
        double m00 = lambda, m01 = 0, m11 = lambda, g0 = 0, g1 = 0;
        for (int i = 0; i < 3; ++i) {
            m00 += a(i, 0) * a(i, 0);
            m01 += a(i, 0) * a(i, 1);
            m11 += a(i, 1) * a(i, 1);
            g0 += a(i, 0) * r[i];
            g1 += a(i, 1) * r[i];
        }
        const double det = m00 * m11 - m01 * m01;
        const double d0 = -(m11 * g0 - m01 * g1) / det;
        const double d1 = -(-m01 * g0 + m00 * g1) / det;
        const auto delta = lm_step(a, r, lambda);
        REQUIRE(delta);
        CHECK((*delta)[0] == doctest::Approx(d0).epsilon(1e-12));
        CHECK((*delta)[1] == doctest::Approx(d1).epsilon(1e-12));
        if (lambda == 0.0) {
            // undamped step lands on the least-squares minimum: A^T r(p0 + d) = 0
            const Eigen::VectorXd r1 = a * (p0 + *delta) - b;
            CHECK((a.transpose() * r1).norm() < 1e-12);
        }
    }
}

TEST_CASE("all-zero data is a perfect fit at initialization") {
    PairSet zero;
    zero.lag = 2;
    zero.windows.assign(20, 0.0);
    zero.targets.assign(10, 0.0);
    zero.weights.assign(10, 1.0);
    const auto r = train_lm(NarNetwork(2, 3), zero, zero, TrainingConfig{});
    CHECK(r.stop_reason == StopReason::perfect_fit);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].train_mse == 0.0);
    CHECK(r.best_epoch == 0);
}

TEST_CASE("noiseless AR(1) reaches training MSE below 1e-4 within 100 epochs") {
    const auto ds = series(ar1(10.0, 0.8, 200), 1);
    TrainingConfig cfg;
    cfg.input_size = 1;
    cfg.hidden_size = 3;
    cfg.max_epochs = 100;
    const auto fit = fit_forecaster(ds, cfg);
    CHECK(fit.trace.size() <= 101);
    double best = fit.trace.front().train_mse;
    for (const auto& e : fit.trace) best = std::min(best, e.train_mse);
    CHECK(best < 1e-4);
    CHECK(fit.trace[static_cast<std::size_t>(fit.best_epoch)].train_mse < 1e-4);
}

TEST_CASE("training MSE never increases and the run is deterministic") {
    Rng rng(23);
    std::vector<double> v;
    double noise = 0.0;
    for (int t = 0; t < 1200; ++t) {
        noise = 0.5 * noise + rng.normal(0.0, 0.1);
        v.push_back(2.0 + std::sin(2.0 * std::numbers::pi * t / 24.0) + noise);
    }
    const auto ds = series(v, 24);
    TrainingConfig cfg;
    cfg.hidden_size = 5;
    cfg.max_epochs = 40;
    const auto a = fit_forecaster(ds, cfg);
    for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].train_mse <= a.trace[i - 1].train_mse);

    const auto b = fit_forecaster(ds, cfg);
    const auto pa = a.model.network.parameters(), pb = b.model.network.parameters();
    CHECK(std::equal(pa.begin(), pa.end(), pb.begin(), pb.end()));

    // mild-noise seasonal AR series: the model beats predicting the last value
    CHECK(a.test_mse <= a.persistence_test_mse);
}

TEST_CASE("validation stall stops training early") {
    Rng rng(31);
    std::vector<double> v;
    for (int t = 0; t < 600; ++t) v.push_back(rng.uniform(0.0, 1.0));
    TrainingConfig cfg;
    cfg.input_size = 4;
    cfg.hidden_size = 4;
    cfg.max_epochs = 500;
    const auto fit = fit_forecaster(series(v, 4), cfg);
    CHECK(fit.stop_reason != StopReason::max_epochs);
    CHECK(fit.best_epoch < static_cast<int>(fit.trace.size()));
}

TEST_CASE("training config validation") {
    TrainingConfig cfg;
    cfg.stop_patience = 0;
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::config);
    cfg = {};
    cfg.validation_fraction = 0.5;
    cfg.test_fraction = 0.5;
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::config);
}

TEST_CASE("monthly weights scale residuals") {
    const auto ds = series(ar1(5.0, 0.9, 60), 1);
    TrainingConfig cfg;
    cfg.input_size = 1;
    std::array<double, 12> w{};
    w.fill(1.0);
    w[0] = 3.0;
    cfg.monthly_weights = w;
    const std::vector<std::size_t> idx = {0, 1, 2};
    const auto p = make_pair_set(ds, idx, Scaling::fit(ds.values()), cfg);
    for (double x : p.weights) CHECK(x == 3.0);
}

TEST_CASE("a constant net forecasts a flat curve") {
    NarNetwork net(24, 2);
    std::vector<double> p(net.parameter_count(), 0.0);
    p.back() = 0.5;
    net.set_parameters(p);
    const NarModel m{net, Scaling{0.0, 4.0}, TrainingConfig{}};
    // unit 0.5 -> 0 + 1.5 * 2 = 3
    const auto day = predict_day(m, std::vector<double>(30, 1.0));
    for (int t = 0; t < kSlotsPerDay; ++t) CHECK(day[t] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("an exact AR(1) net reproduces the recursion in closed loop") {
    const auto m = linear_model(0.8);
    const auto history = ar1(0.9, 0.8, 10);
    const auto out = forecast_series(m, history, 24);
    double y = history.back();
    std::vector<double> expect;
    for (int k = 0; k < 24; ++k) {
        y *= 0.8;
        expect.push_back(y);
        CHECK(std::abs(out[static_cast<std::size_t>(k)] - y) < 1e-9);
    }
    const auto day = predict_day(m, history);
    const auto oracle = hourly_to_slots(expect);
    for (int t = 0; t < kSlotsPerDay; ++t) CHECK(std::abs(day[t] - oracle[t]) < 1e-9);
}

TEST_CASE("forecasts are clamped non-negative, finite and 48 long") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto net = NarNetwork::random(6, 4, rng.next_u64());
        const NarModel m{net, Scaling{-3.0, 1.0}, TrainingConfig{}};
        std::vector<double> hist(12);
        for (auto& h : hist) h = rng.uniform(0.0, 2.0);
        const auto day = predict_day(m, hist);
        CHECK(day.values().size() == 48);
        for (double v : day.values()) {
            CHECK(v >= 0.0);
            CHECK(std::isfinite(v));
        }
    }
    CHECK(kind_of([&] { predict_day(linear_model(0.5), std::vector<double>{}); }) == ErrorKind::dataset_too_small);
}

TEST_CASE("hour-midpoint interpolation") {
    std::vector<double> h(24);
    std::iota(h.begin(), h.end(), 0.0);
    const auto c = hourly_to_slots(h);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.25);
    CHECK(c[2] == 0.75);
    CHECK(c[3] == 1.25);
    CHECK(c[47] == 23.0);
    CHECK(kind_of([] { hourly_to_slots(std::vector<double>(23, 1.0)); }) == ErrorKind::shape);
}

TEST_CASE("autocorrelation of an alternating series") {
    for (int n : {100, 1000, 10000}) {
        std::vector<double> e(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = i % 2 ? -1.0 : 1.0;
        const auto ac = error_autocorrelation(e, 5);
        CHECK(ac.r[0] == 1.0);
        CHECK(ac.r[1] == doctest::Approx(-(n - 1.0) / n).epsilon(1e-12));
        CHECK(ac.r[2] == doctest::Approx((n - 2.0) / n).epsilon(1e-12));
    }
}

TEST_CASE("autocorrelation bound and definition") {
    Rng rng(3);
    std::vector<double> e(400);
    for (auto& x : e) x = rng.normal();
    const auto ac = error_autocorrelation(e, 20);
    CHECK(ac.r.size() == 21);
    CHECK(ac.r[0] == 1.0);
    CHECK(ac.bound == doctest::Approx(1.96 / 20.0));
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / 400.0;
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < 400; ++t) {
        den += (e[t] - mean) * (e[t] - mean);
        if (t + 3 < 400) num += (e[t] - mean) * (e[t + 3] - mean);
    }
    CHECK(ac.r[3] == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("white-noise residuals stay inside the 95% band") {
    std::size_t inside = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        std::vector<double> e(1000);
        for (auto& x : e) x = rng.normal();
        const auto ac = error_autocorrelation(e, 20);
        for (std::size_t k = 1; k < ac.r.size(); ++k) inside += std::abs(ac.r[k]) <= ac.bound;
        total += 20;
    }
    CHECK(static_cast<double>(inside) / static_cast<double>(total) >= 0.93);
}

TEST_CASE("constant residuals have no autocorrelation") {
    CHECK(kind_of([] { error_autocorrelation(std::vector<double>(50, 0.3)); }) == ErrorKind::undefined_metric);
    CHECK(kind_of([] { error_autocorrelation(std::vector<double>(19, 0.3)); }) == ErrorKind::dataset_too_small);
}

TEST_CASE("model JSON round-trip re-verifies parameter counts") {
    NarModel m{NarNetwork::random(5, 3, 9), Scaling{0.1, 3.3}, TrainingConfig{}};
    m.config.input_size = 5;
    m.config.hidden_size = 3;
    m.config.monthly_weights = std::array<double, 12>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    const auto j = to_json(m);
    CHECK(model_from_json(nlohmann::json::parse(j.dump())) == m);

    auto bad = j;
    bad["parameters"]["hidden_bias"].push_back(0.0);
    CHECK(kind_of([&] { model_from_json(bad); }) == ErrorKind::format);
    bad = j;
    bad.erase("normalization");
    CHECK(kind_of([&] { model_from_json(bad); }) == ErrorKind::format);
}

}  // TEST_SUITE
