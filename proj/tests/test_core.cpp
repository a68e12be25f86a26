#include "drm/core.hpp"
#include "drm/curve_ops.hpp"
#include "drm/error.hpp"
#include "drm/rng.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace drm;
using drm::test::kind_of;

namespace {

LoadCurve random_curve(Rng& rng, double hi = 3.0) {
    SlotValues v;
    for (auto& x : v) x = rng.uniform(0.0, hi);
    return LoadCurve(v);
}

ApplianceInstance instance(const ApplianceSpec& spec) { return expand_instances(std::span(&spec, 1)).front(); }

}  // namespace

TEST_SUITE("core") {

TEST_CASE("day grid covers one day and slot numbering round-trips") {
    CHECK(kSlotsPerDay * kSlotMinutes == 1440);
    for (int ext = 1; ext <= kSlotsPerDay; ++ext) CHECK(slot_to_external(slot_from_external(ext)) == ext);
    for (int in = 0; in < kSlotsPerDay; ++in) CHECK(slot_from_external(slot_to_external(in)) == in);
    CHECK(kind_of([] { slot_from_external(0); }) == ErrorKind::format);
    CHECK(kind_of([] { slot_from_external(49); }) == ErrorKind::format);
    CHECK(kind_of([] { slot_to_external(48); }) == ErrorKind::parameter);
}

TEST_CASE("dates parse and format") {
    const auto d = parse_date("2023-02-28");
    REQUIRE(d);
    CHECK(format_date(*d) == "2023-02-28");
    CHECK_FALSE(parse_date("2023-02-30"));
    CHECK_FALSE(parse_date("2023-2-3"));
    CHECK_FALSE(parse_date("yesterday"));
}

TEST_CASE("load curve rejects negative, non-finite and wrong-length input") {
    SlotValues v{};
    v[3] = -0.1;
    CHECK(kind_of([&] { LoadCurve c(v); }) == ErrorKind::format);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK(kind_of([&] { LoadCurve c(v); }) == ErrorKind::format);
    std::vector<double> short_row(47, 1.0);
    CHECK(kind_of([&] { LoadCurve::from_span(short_row); }) == ErrorKind::format);
}

TEST_CASE("appliance validation") {
    auto ok = ApplianceSpec::make_shiftable("dw", {1.0, 0.5}, {10, 20}, 12, 3);
    CHECK_NOTHROW(ok.validate());

    auto bad = ok;
    bad.power_profile = {1.0};
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::config);

    bad = ok;
    bad.window = {10, 10};
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::config);

    bad = ok;
    bad.window = {40, 48};
    CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::config);

    auto fixed = ApplianceSpec::make_fixed("fridge", {0.1, 0.1, 0.1}, 5);
    CHECK(fixed.window == SlotInterval{5, 7});
    CHECK(fixed.max_shift() == 0);
    fixed.preference_shift[5] = 1;
    CHECK(kind_of([&] { fixed.validate(); }) == ErrorKind::config);
}

TEST_CASE("counts expand into independent instances") {
    std::vector<ApplianceSpec> apps = {ApplianceSpec::make_fixed("lamp", {0.1}, 3, 3),
                                       ApplianceSpec::make_fixed("tv", {0.2}, 4)};
    const auto inst = expand_instances(apps);
    REQUIRE(inst.size() == 4);
    CHECK(inst[0].instance_id == "lamp#1");
    CHECK(inst[2].instance_id == "lamp#3");
    CHECK(inst[3].instance_id == "tv");
    for (const auto& i : inst) CHECK(i.spec.count == 1);
}

TEST_CASE("total_curve of one fixed device") {
    // external slots 5,6 -> internal 4,5
    const auto spec = ApplianceSpec::make_fixed("heater", {1.0, 1.0}, 4);
    const auto inst = instance(spec);
    const int start = 4;
    const auto c = total_curve(std::span(&inst, 1), std::span(&start, 1));
    for (int t = 0; t < kSlotsPerDay; ++t) CHECK(c[t] == (t == 4 || t == 5 ? 1.0 : 0.0));
}

TEST_CASE("total_curve of nothing is zero") {
    const auto c = total_curve({}, {});
    CHECK(c == LoadCurve());
}

TEST_CASE("total_curve matches per-(device, slot) accumulation") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ApplianceSpec> specs;
        std::vector<int> starts;
        for (int d = 0; d < 3; ++d) {
            const int dur = static_cast<int>(rng.uniform_int(1, 8));
            std::vector<double> p(static_cast<std::size_t>(dur));
            for (auto& x : p) x = rng.uniform(0.1, 2.0);
            const int start = static_cast<int>(rng.uniform_int(10, 20));
            specs.push_back(ApplianceSpec::make_shiftable("a" + std::to_string(d), p, {0, 47}, start, 48));
            starts.push_back(static_cast<int>(rng.uniform_int(0, kSlotsPerDay - dur)));
        }
        const auto inst = expand_instances(specs);
        const auto c = total_curve(inst, starts);
        for (int t = 0; t < kSlotsPerDay; ++t) {
            double expect = 0.0;
            for (std::size_t d = 0; d < specs.size(); ++d)
                for (int k = 0; k < specs[d].duration_slots; ++k)
                    if (starts[d] + k == t) expect += specs[d].power_profile[static_cast<std::size_t>(k)];
            CHECK(c[t] == doctest::Approx(expect).epsilon(1e-15));
        }
    }
}

TEST_CASE("total_curve is additive over disjoint device sets") {
    Rng rng(5);
    std::vector<ApplianceSpec> a, b;
    std::vector<int> sa, sb;
    for (int d = 0; d < 4; ++d) {
        auto& set = d % 2 ? a : b;
        auto& st = d % 2 ? sa : sb;
        set.push_back(ApplianceSpec::make_shiftable("x" + std::to_string(d), {rng.uniform(0.1, 1), rng.uniform(0.1, 1)},
                                                    {0, 47}, 20, 48));
        st.push_back(static_cast<int>(rng.uniform_int(0, 46)));
    }
    auto all = a;
    all.insert(all.end(), b.begin(), b.end());
    auto sall = sa;
    sall.insert(sall.end(), sb.begin(), sb.end());
    const auto ia = expand_instances(a), ib = expand_instances(b), iall = expand_instances(all);
    const auto sum = total_curve(ia, sa) + total_curve(ib, sb);
    const auto joint = total_curve(iall, sall);
    for (int t = 0; t < kSlotsPerDay; ++t) CHECK(joint[t] == doctest::Approx(sum[t]).epsilon(1e-15));
}

TEST_CASE("placement outside the grid is a feasibility error naming the device") {
    const auto spec = ApplianceSpec::make_fixed("oven", {1.0, 1.0, 1.0}, 10);
    const auto inst = instance(spec);
    const int start = 46;
    try {
        total_curve(std::span(&inst, 1), std::span(&start, 1));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::feasibility);
        CHECK(std::string(e.what()).find("oven") != std::string::npos);
        CHECK(std::string(e.what()).find("47") != std::string::npos);
    }
}

TEST_CASE("split_by_source separates grid and PV portions") {
    std::vector<ApplianceSpec> specs = {ApplianceSpec::make_fixed("fridge", {0.5, 0.5}, 10),
                                        ApplianceSpec::make_shiftable("dw", {1.0, 2.0}, {0, 47}, 10, 48)};
    const auto inst = expand_instances(specs);
    const std::vector<int> starts = {10, 10};
    SlotFlags flags{};
    flags[11] = true;
    const auto b = split_by_source(inst, starts, flags);
    CHECK(b.all[10] == 1.5);
    CHECK(b.all[11] == 2.5);
    CHECK(b.shiftable[11] == 2.0);
    CHECK(b.grid[10] == 1.5);
    CHECK(b.grid[11] == 0.5);
    CHECK(b.pv_supplied[11] == 2.0);
    for (int t = 0; t < kSlotsPerDay; ++t) CHECK(b.grid[t] + b.pv_supplied[t] == doctest::Approx(b.all[t]));
}

TEST_CASE("load_factor") {
    CHECK(load_factor(LoadCurve::constant(2.0)) == 1.0);

    SlotValues spike{};
    spike[17] = 4.0;
    CHECK(load_factor(LoadCurve(spike)) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));

    CHECK(kind_of([] { load_factor(LoadCurve()); }) == ErrorKind::undefined_metric);

    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto c = random_curve(rng);
        const auto& v = c.values();
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 48.0;
        const double peak = *std::max_element(v.begin(), v.end());
        const double lf = load_factor(c);
        CHECK(lf == doctest::Approx(mean / peak).epsilon(1e-14));
        CHECK(lf > 0.0);
        CHECK(lf <= 1.0);
        for (double k : {0.01, 0.7, 3.0, 1e4})
            CHECK(load_factor(c.scaled(k)) == doctest::Approx(lf).epsilon(1e-12));
    }
}

TEST_CASE("bill") {
    CHECK(bill(LoadCurve(), PricingSignal::flat(0.3)) == 0.0);
    CHECK(bill(LoadCurve::constant(1.0), PricingSignal::flat(0.10)) == doctest::Approx(2.40).epsilon(1e-14));

    PricingSignal tou;
    for (int t = 0; t < kSlotsPerDay; ++t) tou.price_per_slot[static_cast<std::size_t>(t)] = t >= 34 && t <= 43 ? 0.3 : 0.1;
    tou.peak_windows = {{34, 43}};
    Rng rng(8);
    const auto c = random_curve(rng);
    double hand = 0.0;
    for (int t = 0; t < kSlotsPerDay; ++t) hand += c[t] * 0.5 * (t >= 34 && t <= 43 ? 0.3 : 0.1);
    CHECK(bill(c, tou) == doctest::Approx(hand).epsilon(1e-14));

    std::vector<double> short_price(47, 0.1);
    CHECK(kind_of([&] { bill(c.span(), short_price); }) == ErrorKind::format);
}

TEST_CASE("bill is linear in curve and price") {
    Rng rng(21);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_curve(rng), b = random_curve(rng);
        SlotValues p1, p2, psum;
        for (std::size_t t = 0; t < 48; ++t) {
            p1[t] = rng.uniform(0.05, 0.4);
            p2[t] = rng.uniform(0.05, 0.4);
            psum[t] = p1[t] + p2[t];
        }
        const double k = rng.uniform(0.1, 5.0);
        CHECK(bill(a.span(), p1) + bill(b.span(), p1) == doctest::Approx(bill((a + b).span(), p1)).epsilon(1e-12));
        CHECK(bill(a.scaled(k).span(), p1) == doctest::Approx(k * bill(a.span(), p1)).epsilon(1e-12));
        CHECK(bill(a.span(), p1) + bill(a.span(), p2) == doctest::Approx(bill(a.span(), psum)).epsilon(1e-12));
    }
}

TEST_CASE("pricing validation") {
    auto p = PricingSignal::flat(0.1);
    p.peak_windows = {{30, 35}, {35, 40}};
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::config);
    p.peak_windows = {{30, 34}, {35, 40}};
    CHECK_NOTHROW(p.validate());
    CHECK(p.is_peak(35));
    CHECK_FALSE(p.is_peak(41));
    p.price_per_slot[0] = 0.0;
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::config);
}

TEST_CASE("household requires unique appliance ids") {
    Household h;
    h.id = "h1";
    CHECK(kind_of([&] { h.validate(); }) == ErrorKind::config);
    h.appliances = {ApplianceSpec::make_fixed("a", {0.1}, 0), ApplianceSpec::make_fixed("a", {0.1}, 1)};
    CHECK(kind_of([&] { h.validate(); }) == ErrorKind::config);
    h.appliances.pop_back();
    CHECK_NOTHROW(h.validate());
}

}  // TEST_SUITE
