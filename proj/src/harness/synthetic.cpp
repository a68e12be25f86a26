#include "drm/error.hpp"
#include "drm/harness.hpp"
#include "drm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace drm::harness {

namespace {

struct Archetype {
    const char* name;
    ApplianceKind kind;
    std::vector<double> profile;  // kW per slot of the run
    int preferred;                // typical start slot
    SlotInterval window;
    int max_shift;
    double use_probability;       // chance of running on a historical day
};

const std::vector<Archetype>& archetypes() {
    static const std::vector<Archetype> table = {
        {"air_conditioner", ApplianceKind::shiftable, {1.4, 1.4, 1.3, 1.3}, 35, {24, 47}, 8, 0.8},
        {"dishwasher", ApplianceKind::shiftable, {1.2, 0.3, 1.0}, 40, {28, 47}, 8, 0.7},
        {"laundry_machine", ApplianceKind::shiftable, {0.5, 2.0, 0.4, 0.6}, 37, {14, 47}, 10, 0.5},
        {"iron", ApplianceKind::shiftable, {1.0, 1.0}, 39, {16, 46}, 8, 0.4},
        {"refrigerator", ApplianceKind::fixed, {}, 0, {0, 47}, 0, 1.0},
        {"lamp", ApplianceKind::fixed, std::vector<double>(10, 0.12), 36, {36, 45}, 0, 1.0},
    };
    return table;
}

const Archetype* find_archetype(std::string_view name) {
    for (const auto& a : archetypes())
        if (name == a.name) return &a;
    return nullptr;
}

std::vector<double> refrigerator_profile() {
    std::vector<double> p(kSlotsPerDay);
    for (int t = 0; t < kSlotsPerDay; ++t) p[static_cast<std::size_t>(t)] = t % 3 == 0 ? 0.12 : 0.06;
    return p;
}

// Unit-energy shape with a morning and a larger evening bump.
SlotValues base_shape() {
    SlotValues s{};
    double total = 0.0;
    for (int t = 0; t < kSlotsPerDay; ++t) {
        const double h = (t + 0.5) / 2.0;
        const double v = 0.35 + 0.5 * std::exp(-0.5 * std::pow((h - 7.5) / 1.2, 2)) +
                         0.9 * std::exp(-0.5 * std::pow((h - 19.5) / 2.0, 2));
        s[static_cast<std::size_t>(t)] = v;
        total += v * kSlotHours;
    }
    for (auto& v : s) v /= total;
    return s;
}

LoadCurve pv_profile(double peak_kw) {
    SlotValues g{};
    // Daylight from 06:00 to 20:00, zero otherwise.
    constexpr int sunrise = 12;
    constexpr int sunset = 40;
    for (int t = sunrise; t < sunset; ++t) {
        const double x = (t + 0.5 - sunrise) / (sunset - sunrise);
        g[static_cast<std::size_t>(t)] = peak_kw * std::pow(std::sin(std::numbers::pi * x), 2);
    }
    return LoadCurve(g);
}

double seasonal(const Date& d, int peak_day_of_year) {
    const auto doy = (std::chrono::sys_days{d} - std::chrono::sys_days{d.year() / std::chrono::January / 1}).count();
    return std::cos(2.0 * std::numbers::pi * static_cast<double>(doy - peak_day_of_year) / 365.0);
}

int clamp_start(const ApplianceSpec& a, int start) {
    const int lo = std::max(a.window.first, a.preferred_start - a.max_shift());
    const int hi = std::min(a.window.last - a.duration_slots + 1, a.preferred_start + a.max_shift());
    return std::clamp(start, lo, hi);
}

}  // namespace

std::vector<std::string> known_archetypes() {
    std::vector<std::string> out;
    for (const auto& a : archetypes()) out.emplace_back(a.name);
    return out;
}

void SyntheticRecipe::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::config, "synthetic recipe: " + what); };
    if (households < 1) fail("households must be >= 1");
    if (archetypes.empty()) fail("archetype list is empty");
    for (const auto& name : archetypes)
        if (!find_archetype(name)) fail("unknown archetype '" + name + "'");
    if (!(daily_energy_kwh > 0.0)) fail("daily_energy_kwh must be > 0");
    if (history_days < 2) fail("history_days must be >= 2");
    if (simulated_days < 1) fail("simulated_days must be >= 1");
    if (!start.ok()) fail("invalid start date");
    if (!(pv_share >= 0.0 && pv_share <= 1.0)) fail("pv_share must lie in [0, 1]");
    if (!(pv_peak_kw >= 0.0) || !(battery_kwh >= 0.0)) fail("PV size and battery must be >= 0");
    if (peak_window.first < 0 || peak_window.last >= kSlotsPerDay || peak_window.first > peak_window.last)
        fail("invalid peak window");
    if (!(valley_price > 0.0 && shoulder_price > 0.0 && peak_price > 0.0)) fail("prices must be > 0");
}

PricingSignal recipe_pricing(const SyntheticRecipe& r) {
    PricingSignal p;
    constexpr int valley_end = 14;  // 07:00
    for (int t = 0; t < kSlotsPerDay; ++t)
        p.price_per_slot[static_cast<std::size_t>(t)] = r.peak_window.contains(t) ? r.peak_price
                                                       : t < valley_end           ? r.valley_price
                                                                                  : r.shoulder_price;
    p.peak_windows = {r.peak_window};
    p.validate();
    return p;
}

FleetConfig generate_synthetic(const SyntheticRecipe& recipe) {
    recipe.validate();
    FleetConfig fleet;
    fleet.recipe = recipe;
    fleet.pricing = recipe_pricing(recipe);
    fleet.settings.seed = recipe.seed;
    const auto first = std::chrono::sys_days{recipe.start};
    const int total_days = recipe.history_days + recipe.simulated_days;
    for (int d = recipe.history_days; d < total_days; ++d) fleet.days.push_back(Date{first + std::chrono::days{d}});

    const auto shape = base_shape();
    for (int hh = 0; hh < recipe.households; ++hh) {
        Rng rng = Rng::derived(recipe.seed, static_cast<std::uint64_t>(hh));
        Household h;
        char id[16];
        std::snprintf(id, sizeof id, "h%03d", hh + 1);
        h.id = id;

        std::vector<double> use;
        double appliance_energy = 0.0;
        for (const auto& name : recipe.archetypes) {
            const Archetype& a = *find_archetype(name);
            const double scale = rng.uniform(0.85, 1.15);
            ApplianceSpec spec;
            if (a.kind == ApplianceKind::fixed) {
                auto profile = std::string_view(a.name) == "refrigerator" ? refrigerator_profile() : a.profile;
                for (auto& p : profile) p *= scale;
                const int count = std::string_view(a.name) == "lamp" ? static_cast<int>(rng.uniform_int(1, 3)) : 1;
                spec = ApplianceSpec::make_fixed(a.name, std::move(profile), a.preferred, count);
            } else {
                auto profile = a.profile;
                for (auto& p : profile) p *= scale;
                const int dur = static_cast<int>(profile.size());
                const int pref = std::clamp(a.preferred + static_cast<int>(rng.uniform_int(-2, 2)), a.window.first,
                                            a.window.last - dur + 1);
                spec = ApplianceSpec::make_shiftable(a.name, std::move(profile), a.window, pref, a.max_shift);
            }
            use.push_back(a.use_probability);
            appliance_energy += a.use_probability * spec.energy_kwh();
            h.appliances.push_back(std::move(spec));
        }

        const double target = recipe.daily_energy_kwh * rng.uniform(0.85, 1.15);
        const double base_energy = std::max(0.5, target - appliance_energy);
        // Everything not modelled as a device runs as one fixed base load.
        std::vector<double> base(shape.begin(), shape.end());
        for (auto& v : base) v *= base_energy;
        h.appliances.push_back(ApplianceSpec::make_fixed("base_load", base, 0));
        use.push_back(1.0);

        std::optional<LoadCurve> gen;
        if (rng.bernoulli(recipe.pv_share) && recipe.pv_peak_kw > 0.0) {
            PvSystem pv;
            pv.generation = pv_profile(recipe.pv_peak_kw);
            pv.battery_capacity_kwh = recipe.battery_kwh;
            pv.initial_soc_kwh = 0.5 * recipe.battery_kwh;
            pv.charge_rate_kw = 1.0;
            pv.charge_efficiency = 0.95;
            h.pv = pv;
            gen = pv.generation;
        }

        for (int d = 0; d < total_days; ++d) {
            const Date date{first + std::chrono::days{d}};
            SlotValues v{};
            const double level = (1.0 + 0.15 * seasonal(date, 200)) * std::max(0.5, rng.normal(1.0, 0.06));
            for (std::size_t i = 0; i < h.appliances.size(); ++i) {
                const auto& a = h.appliances[i];
                if (a.id == "base_load") {
                    for (int t = 0; t < kSlotsPerDay; ++t) {
                        const auto k = static_cast<std::size_t>(t);
                        v[k] += std::max(0.0, level * a.power_profile[k] * (1.0 + rng.normal(0.0, 0.08)));
                    }
                    continue;
                }
                if (a.kind == ApplianceKind::fixed) {
                    for (int c = 0; c < a.count; ++c)
                        for (int k = 0; k < a.duration_slots; ++k)
                            v[static_cast<std::size_t>(a.preferred_start + k)] += a.power_profile[static_cast<std::size_t>(k)];
                    continue;
                }
                if (!rng.bernoulli(use[i])) continue;
                const int start = clamp_start(a, a.preferred_start + static_cast<int>(rng.uniform_int(-2, 2)));
                for (int k = 0; k < a.duration_slots; ++k)
                    v[static_cast<std::size_t>(start + k)] += a.power_profile[static_cast<std::size_t>(k)];
            }
            h.history.push_back({date, LoadCurve(v)});

            if (gen) {
                SlotValues g{};
                const double clear = std::clamp(1.0 + 0.2 * seasonal(date, 172), 0.0, 1.0);
                const double cloud = rng.uniform(0.35, 1.0);
                for (int t = 0; t < kSlotsPerDay; ++t)
                    g[static_cast<std::size_t>(t)] = (*gen)[t] * clear * cloud * rng.uniform(0.9, 1.0);
                h.pv_history.push_back({date, LoadCurve(g)});
            }
        }
        fleet.households.push_back(std::move(h));
    }
    fleet.validate();
    return fleet;
}

}  // namespace drm::harness
