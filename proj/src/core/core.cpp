#include "drm/core.hpp"

#include "drm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace drm {

namespace {

std::string slot_label(int internal) { return std::to_string(internal + 1); }

}  // namespace

int slot_from_external(int external) {
    if (external < 1 || external > kSlotsPerDay)
        throw Error(ErrorKind::format,
                    "slot " + std::to_string(external) + " outside 1.." + std::to_string(kSlotsPerDay));
    return external - 1;
}

int slot_to_external(int internal) {
    if (internal < 0 || internal >= kSlotsPerDay)
        throw Error(ErrorKind::parameter, "internal slot " + std::to_string(internal) + " outside grid");
    return internal + 1;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto field = [&](std::size_t pos, std::size_t len, auto& out) {
        const char* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, out);
        return ec == std::errc{} && ptr == first + len;
    };
    if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

// ---------------------------------------------------------------------------
// LoadCurve

LoadCurve::LoadCurve(const SlotValues& values) : values_(values) {
    for (int t = 0; t < kSlotsPerDay; ++t) {
        const double v = values_[static_cast<std::size_t>(t)];
        if (!std::isfinite(v) || v < 0.0)
            throw Error(ErrorKind::format,
                        "load curve slot " + slot_label(t) + " has invalid value " + std::to_string(v));
    }
}

LoadCurve LoadCurve::from_span(std::span<const double> values) {
    if (values.size() != kSlotsPerDay)
        throw Error(ErrorKind::format, "load curve needs " + std::to_string(kSlotsPerDay) +
                                           " values, got " + std::to_string(values.size()));
    SlotValues v;
    std::copy(values.begin(), values.end(), v.begin());
    return LoadCurve(v);
}

LoadCurve LoadCurve::constant(double kw) {
    SlotValues v;
    v.fill(kw);
    return LoadCurve(v);
}

double LoadCurve::total_energy_kwh() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) * kSlotHours;
}

double LoadCurve::peak() const { return *std::max_element(values_.begin(), values_.end()); }

double LoadCurve::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / kSlotsPerDay;
}

LoadCurve LoadCurve::operator+(const LoadCurve& other) const {
    SlotValues v;
    for (std::size_t t = 0; t < v.size(); ++t) v[t] = values_[t] + other.values_[t];
    return LoadCurve(v);
}

LoadCurve LoadCurve::scaled(double factor) const {
    if (!(factor >= 0.0)) throw Error(ErrorKind::parameter, "curve scale factor must be >= 0");
    SlotValues v;
    for (std::size_t t = 0; t < v.size(); ++t) v[t] = values_[t] * factor;
    return LoadCurve(v);
}

// ---------------------------------------------------------------------------
// Appliances

std::string_view to_string(ApplianceKind kind) {
    return kind == ApplianceKind::fixed ? "fixed" : "shiftable";
}

std::optional<ApplianceKind> parse_appliance_kind(std::string_view text) {
    if (text == "fixed") return ApplianceKind::fixed;
    if (text == "shiftable") return ApplianceKind::shiftable;
    return std::nullopt;
}

void ApplianceSpec::validate() const {
    auto fail = [this](const std::string& what) {
        throw Error(ErrorKind::config, "appliance '" + id + "': " + what);
    };
    if (id.empty()) throw Error(ErrorKind::config, "appliance with empty id");
    if (id.find('#') != std::string::npos) fail("'#' is reserved for instance suffixes");
    if (duration_slots < 1 || duration_slots > kSlotsPerDay) fail("duration_slots must be in 1..48");
    if (static_cast<int>(power_profile.size()) != duration_slots)
        fail("power profile has " + std::to_string(power_profile.size()) + " entries, duration is " +
             std::to_string(duration_slots));
    for (double p : power_profile)
        if (!std::isfinite(p) || p < 0.0) fail("power profile values must be finite and >= 0");
    if (window.first < 0 || window.last >= kSlotsPerDay || window.first > window.last)
        fail("permitted window outside 1..48");
    if (window.length() < duration_slots) fail("permitted window shorter than duration");
    if (preferred_start < 0 || preferred_start >= kSlotsPerDay) fail("preferred start outside 1..48");
    if (count < 1) fail("count must be >= 1");
    for (int s : preference_shift)
        if (s < 0) fail("preference shifts must be >= 0");
    if (kind == ApplianceKind::fixed) {
        if (window != SlotInterval{preferred_start, preferred_start + duration_slots - 1})
            fail("fixed device window must equal its run");
        if (std::any_of(preference_shift.begin(), preference_shift.end(), [](int s) { return s != 0; }))
            fail("fixed device must have zero preference shift");
    }
}

double ApplianceSpec::energy_kwh() const {
    return std::accumulate(power_profile.begin(), power_profile.end(), 0.0) * kSlotHours * count;
}

ApplianceSpec ApplianceSpec::make_fixed(std::string id, std::vector<double> profile, int start,
                                        int count) {
    ApplianceSpec a;
    a.id = std::move(id);
    a.kind = ApplianceKind::fixed;
    a.duration_slots = static_cast<int>(profile.size());
    a.power_profile = std::move(profile);
    a.preferred_start = start;
    a.window = {start, start + a.duration_slots - 1};
    a.count = count;
    a.validate();
    return a;
}

ApplianceSpec ApplianceSpec::make_shiftable(std::string id, std::vector<double> profile,
                                            SlotInterval window, int preferred_start, int max_shift,
                                            int count) {
    ApplianceSpec a;
    a.id = std::move(id);
    a.kind = ApplianceKind::shiftable;
    a.duration_slots = static_cast<int>(profile.size());
    a.power_profile = std::move(profile);
    a.window = window;
    a.preferred_start = preferred_start;
    a.preference_shift.fill(max_shift);
    a.count = count;
    a.validate();
    return a;
}

std::vector<ApplianceInstance> expand_instances(std::span<const ApplianceSpec> appliances) {
    std::vector<ApplianceInstance> out;
    for (const auto& a : appliances) {
        ApplianceSpec single = a;
        single.count = 1;
        for (int k = 1; k <= a.count; ++k) {
            std::string iid = a.count == 1 ? a.id : a.id + "#" + std::to_string(k);
            out.push_back({std::move(iid), single});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pricing, PV, household

void PricingSignal::validate() const {
    for (int t = 0; t < kSlotsPerDay; ++t) {
        const double p = price_per_slot[static_cast<std::size_t>(t)];
        if (!std::isfinite(p) || p <= 0.0)
            throw Error(ErrorKind::config, "price at slot " + slot_label(t) + " must be > 0");
    }
    auto windows = peak_windows;
    std::sort(windows.begin(), windows.end(),
              [](const SlotInterval& a, const SlotInterval& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        if (w.first < 0 || w.last >= kSlotsPerDay || w.first > w.last)
            throw Error(ErrorKind::config, "peak window outside 1..48");
        if (i > 0 && w.first <= windows[i - 1].last)
            throw Error(ErrorKind::config, "peak windows overlap");
    }
}

bool PricingSignal::is_peak(int slot) const {
    return std::any_of(peak_windows.begin(), peak_windows.end(),
                       [slot](const SlotInterval& w) { return w.contains(slot); });
}

SlotFlags PricingSignal::peak_mask() const {
    SlotFlags mask{};
    for (const auto& w : peak_windows)
        for (int t = w.first; t <= w.last; ++t) mask[static_cast<std::size_t>(t)] = true;
    return mask;
}

PricingSignal PricingSignal::flat(double price) {
    PricingSignal p;
    p.price_per_slot.fill(price);
    return p;
}

void PvSystem::validate() const {
    auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
    if (bad(battery_capacity_kwh)) throw Error(ErrorKind::config, "battery capacity must be >= 0");
    if (bad(initial_soc_kwh) || initial_soc_kwh > battery_capacity_kwh)
        throw Error(ErrorKind::config, "battery state of charge must lie in [0, capacity]");
    if (!std::isfinite(charge_rate_kw) || charge_rate_kw <= 0.0)
        throw Error(ErrorKind::config, "charge rate must be > 0");
    if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0))
        throw Error(ErrorKind::config, "charge efficiency must lie in (0, 1]");
}

void Household::validate() const {
    if (id.empty()) throw Error(ErrorKind::config, "household with empty id");
    if (appliances.empty()) throw Error(ErrorKind::config, "household '" + id + "' has no appliances");
    std::set<std::string> seen;
    for (const auto& a : appliances) {
        a.validate();
        if (!seen.insert(a.id).second)
            throw Error(ErrorKind::config, "household '" + id + "': duplicate appliance id '" + a.id + "'");
    }
    if (pv) pv->validate();
    auto ascending = [](const std::vector<DailyCurve>& h) {
        return std::adjacent_find(h.begin(), h.end(), [](const DailyCurve& a, const DailyCurve& b) {
                   return !(a.date < b.date);
               }) == h.end();
    };
    if (!ascending(history) || !ascending(pv_history))
        throw Error(ErrorKind::config, "household '" + id + "': history dates must be strictly ascending");
}

}  // namespace drm
