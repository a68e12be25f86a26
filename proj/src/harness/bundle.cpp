#include "csv.hpp"

#include "drm/error.hpp"
#include "drm/harness.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace drm::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::config, where + ": " + what);
}

// Reads only the listed keys, rejecting anything else so typos surface.
void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) config_fail(where, "expected an object");
    for (const auto& [key, _] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            config_fail(where, "unknown key '" + key + "'");
}

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        config_fail(where, std::string("bad value for '") + key + "'");
    }
}

Date date_from(const json& j, const std::string& where) {
    if (!j.is_string()) config_fail(where, "dates must be strings");
    const auto d = parse_date(j.get<std::string>());
    if (!d) config_fail(where, "invalid date '" + j.get<std::string>() + "'");
    return *d;
}

json weights_json(scheduler::ApplianceWeights w) { return {{"shift", w.shift}, {"delay", w.delay}}; }

scheduler::ApplianceWeights weights_from(const json& j, const std::string& where) {
    check_keys(j, {"shift", "delay"}, where);
    scheduler::ApplianceWeights w;
    read_opt(j, "shift", w.shift, where);
    read_opt(j, "delay", w.delay, where);
    return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Settings and recipe JSON

json to_json(const FleetSettings& s) {
    const auto& t = s.training;
    json per_type = json::object();
    for (const auto& [type, w] : s.discomfort.overrides()) per_type[type] = weights_json(w);
    json disc = weights_json(s.discomfort.fallback());
    disc["per_type"] = per_type;
    return {
        {"seed", s.seed},
        {"threads", s.threads},
        {"training",
         {{"input_size", t.input_size},
          {"hidden_size", t.hidden_size},
          {"max_epochs", t.max_epochs},
          {"initial_damping", t.lm_initial_damping},
          {"damping_up", t.lm_damping_up},
          {"damping_down", t.lm_damping_down},
          {"damping_max", t.lm_damping_max},
          {"stop_patience", t.stop_patience},
          {"min_relative_improvement", t.min_relative_improvement},
          {"validation_fraction", t.validation_fraction},
          {"test_fraction", t.test_fraction},
          {"monthly_weights", t.monthly_weights ? json(*t.monthly_weights) : json(nullptr)}}},
        {"regression", {{"segments", s.regression_segments}, {"degree", s.regression_degree}}},
        {"l_min", s.l_min ? json(*s.l_min) : json(nullptr)},
        {"discomfort", disc},
        {"discomfort_blend", s.discomfort_blend ? json(*s.discomfort_blend) : json(nullptr)},
        {"no_harm", s.no_harm},
        {"solver",
         {{"exact_threshold", s.solver.exact_threshold},
          {"restarts", s.solver.restarts},
          {"max_passes", s.solver.max_passes}}},
        {"online_noise", s.online_noise},
    };
}

FleetSettings settings_from_json(const json& j) {
    const std::string where = "settings";
    check_keys(j, {"seed", "threads", "training", "regression", "l_min", "discomfort", "discomfort_blend", "no_harm",
                   "solver", "online_noise"},
               where);
    FleetSettings s;
    read_opt(j, "seed", s.seed, where);
    read_opt(j, "threads", s.threads, where);
    if (j.contains("training")) {
        const auto& t = j.at("training");
        const std::string w = where + ".training";
        check_keys(t, {"input_size", "hidden_size", "max_epochs", "initial_damping", "damping_up", "damping_down",
                       "damping_max", "stop_patience", "min_relative_improvement", "validation_fraction",
                       "test_fraction", "monthly_weights"},
                   w);
        auto& c = s.training;
        read_opt(t, "input_size", c.input_size, w);
        read_opt(t, "hidden_size", c.hidden_size, w);
        read_opt(t, "max_epochs", c.max_epochs, w);
        read_opt(t, "initial_damping", c.lm_initial_damping, w);
        read_opt(t, "damping_up", c.lm_damping_up, w);
        read_opt(t, "damping_down", c.lm_damping_down, w);
        read_opt(t, "damping_max", c.lm_damping_max, w);
        read_opt(t, "stop_patience", c.stop_patience, w);
        read_opt(t, "min_relative_improvement", c.min_relative_improvement, w);
        read_opt(t, "validation_fraction", c.validation_fraction, w);
        read_opt(t, "test_fraction", c.test_fraction, w);
        if (t.contains("monthly_weights") && !t.at("monthly_weights").is_null()) {
            std::array<double, 12> mw{};
            read_opt(t, "monthly_weights", mw, w);
            c.monthly_weights = mw;
        }
    }
    if (j.contains("regression")) {
        const auto& r = j.at("regression");
        check_keys(r, {"segments", "degree"}, where + ".regression");
        read_opt(r, "segments", s.regression_segments, where);
        read_opt(r, "degree", s.regression_degree, where);
    }
    if (j.contains("l_min") && !j.at("l_min").is_null()) {
        double v = 0.0;
        read_opt(j, "l_min", v, where);
        s.l_min = v;
    }
    if (j.contains("discomfort")) {
        const auto& d = j.at("discomfort");
        check_keys(d, {"shift", "delay", "per_type"}, where + ".discomfort");
        json base = d;
        base.erase("per_type");
        s.discomfort = scheduler::DiscomfortWeights(weights_from(base, where + ".discomfort"));
        if (d.contains("per_type")) {
            if (!d.at("per_type").is_object()) config_fail(where, "discomfort.per_type must be an object");
            for (const auto& [type, w] : d.at("per_type").items())
                s.discomfort.set(type, weights_from(w, where + ".discomfort.per_type." + type));
        }
    }
    if (j.contains("discomfort_blend") && !j.at("discomfort_blend").is_null()) {
        double v = 0.0;
        read_opt(j, "discomfort_blend", v, where);
        s.discomfort_blend = v;
    }
    read_opt(j, "no_harm", s.no_harm, where);
    if (j.contains("solver")) {
        const auto& sv = j.at("solver");
        check_keys(sv, {"exact_threshold", "restarts", "max_passes"}, where + ".solver");
        read_opt(sv, "exact_threshold", s.solver.exact_threshold, where);
        read_opt(sv, "restarts", s.solver.restarts, where);
        read_opt(sv, "max_passes", s.solver.max_passes, where);
    }
    read_opt(j, "online_noise", s.online_noise, where);
    s.validate();
    return s;
}

void FleetSettings::validate() const {
    training.validate();
    if (regression_segments < 1 || regression_degree < 1)
        throw Error(ErrorKind::config, "regression segments and degree must be >= 1");
    if (l_min && !(*l_min > 0.0)) throw Error(ErrorKind::config, "l_min must be > 0");
    if (discomfort_blend && !(*discomfort_blend >= 0.0)) throw Error(ErrorKind::config, "discomfort_blend must be >= 0");
    if (!(solver.exact_threshold >= 1.0)) throw Error(ErrorKind::config, "solver.exact_threshold must be >= 1");
    if (solver.restarts < 0 || solver.max_passes < 1) throw Error(ErrorKind::config, "invalid solver settings");
    if (!(online_noise >= 0.0)) throw Error(ErrorKind::config, "online_noise must be >= 0");
    if (threads < 0) throw Error(ErrorKind::config, "threads must be >= 0");
}

json to_json(const SyntheticRecipe& r) {
    return {
        {"households", r.households},
        {"seed", r.seed},
        {"archetypes", r.archetypes},
        {"daily_energy_kwh", r.daily_energy_kwh},
        {"history_days", r.history_days},
        {"simulated_days", r.simulated_days},
        {"start", format_date(r.start)},
        {"pv_share", r.pv_share},
        {"pv_peak_kw", r.pv_peak_kw},
        {"battery_kwh", r.battery_kwh},
        {"peak_window", {slot_to_external(r.peak_window.first), slot_to_external(r.peak_window.last)}},
        {"valley_price", r.valley_price},
        {"shoulder_price", r.shoulder_price},
        {"peak_price", r.peak_price},
    };
}

SyntheticRecipe recipe_from_json(const json& j) {
    const std::string where = "recipe";
    check_keys(j, {"households", "seed", "archetypes", "daily_energy_kwh", "history_days", "simulated_days", "start",
                   "pv_share", "pv_peak_kw", "battery_kwh", "peak_window", "valley_price", "shoulder_price",
                   "peak_price"},
               where);
    SyntheticRecipe r;
    read_opt(j, "households", r.households, where);
    read_opt(j, "seed", r.seed, where);
    read_opt(j, "archetypes", r.archetypes, where);
    read_opt(j, "daily_energy_kwh", r.daily_energy_kwh, where);
    read_opt(j, "history_days", r.history_days, where);
    read_opt(j, "simulated_days", r.simulated_days, where);
    if (j.contains("start")) r.start = date_from(j.at("start"), where + ".start");
    read_opt(j, "pv_share", r.pv_share, where);
    read_opt(j, "pv_peak_kw", r.pv_peak_kw, where);
    read_opt(j, "battery_kwh", r.battery_kwh, where);
    if (j.contains("peak_window")) {
        std::array<int, 2> w{};
        read_opt(j, "peak_window", w, where);
        r.peak_window = {slot_from_external(w[0]), slot_from_external(w[1])};
    }
    read_opt(j, "valley_price", r.valley_price, where);
    read_opt(j, "shoulder_price", r.shoulder_price, where);
    read_opt(j, "peak_price", r.peak_price, where);
    r.validate();
    return r;
}

void FleetConfig::validate() const {
    if (households.empty()) throw Error(ErrorKind::config, "fleet has no households");
    if (days.empty()) throw Error(ErrorKind::config, "fleet has no simulated days");
    pricing.validate();
    settings.validate();
    std::set<std::string> ids;
    for (const auto& h : households) {
        h.validate();
        if (!ids.insert(h.id).second) throw Error(ErrorKind::config, "duplicate household id '" + h.id + "'");
    }
    for (std::size_t i = 1; i < days.size(); ++i)
        if (!(days[i - 1] < days[i])) throw Error(ErrorKind::config, "simulated days must be strictly ascending");
}

// ---------------------------------------------------------------------------
// CSV sections

namespace {

std::string pricing_csv(const PricingSignal& p) {
    std::string out = "slot,price,is_peak\n";
    for (int t = 0; t < kSlotsPerDay; ++t)
        out += std::to_string(t + 1) + "," + format_double(p.price_per_slot[static_cast<std::size_t>(t)]) + "," +
               (p.is_peak(t) ? "1" : "0") + "\n";
    return out;
}

PricingSignal read_pricing(const fs::path& path) {
    static constexpr std::string_view cols[] = {"slot", "price", "is_peak"};
    const auto table = csv::Table::read(path, cols);
    PricingSignal p;
    SlotFlags seen{};
    SlotFlags peak{};
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto row = table.row(i);
        const auto ext = row.integer("slot");
        if (ext < 1 || ext > kSlotsPerDay) row.fail("slot " + std::to_string(ext) + " outside 1..48");
        const auto t = static_cast<std::size_t>(ext - 1);
        if (seen[t]) row.fail("slot " + std::to_string(ext) + " listed twice");
        seen[t] = true;
        p.price_per_slot[t] = row.number("price");
        const auto flag = row.integer("is_peak");
        if (flag != 0 && flag != 1) row.fail("is_peak must be 0 or 1");
        peak[t] = flag == 1;
    }
    if (table.size() != static_cast<std::size_t>(kSlotsPerDay))
        throw Error(ErrorKind::format, table.name() + ": expected 48 slot rows, found " + std::to_string(table.size()));
    for (int t = 0; t < kSlotsPerDay;) {
        if (!peak[static_cast<std::size_t>(t)]) {
            ++t;
            continue;
        }
        int end = t;
        while (end + 1 < kSlotsPerDay && peak[static_cast<std::size_t>(end + 1)]) ++end;
        p.peak_windows.push_back({t, end});
        t = end + 1;
    }
    try {
        p.validate();
    } catch (const Error& e) {
        rethrow_with_context(e, table.name());
    }
    return p;
}

std::string appliances_csv(const std::vector<ApplianceSpec>& apps) {
    std::string out = "id,kind,duration_slots,window_start,window_end,preferred_start,max_shift,power_csv,count\n";
    for (const auto& a : apps) {
        std::string power;
        for (std::size_t k = 0; k < a.power_profile.size(); ++k)
            power += (k ? ";" : "") + format_double(a.power_profile[k]);
        out += a.id + "," + std::string(to_string(a.kind)) + "," + std::to_string(a.duration_slots) + "," +
               std::to_string(a.window.first + 1) + "," + std::to_string(a.window.last + 1) + "," +
               std::to_string(a.preferred_start + 1) + "," + std::to_string(a.max_shift()) + "," + power + "," +
               std::to_string(a.count) + "\n";
    }
    return out;
}

std::vector<ApplianceSpec> read_appliances(const fs::path& path) {
    static constexpr std::string_view cols[] = {"id",         "kind",      "duration_slots", "window_start", "window_end",
                                                "preferred_start", "max_shift", "power_csv",      "count"};
    const auto table = csv::Table::read(path, cols);
    std::vector<ApplianceSpec> out;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto row = table.row(i);
        ApplianceSpec a;
        a.id = row.text("id");
        const auto kind = parse_appliance_kind(row.text("kind"));
        if (!kind) row.fail("unknown kind '" + row.text("kind") + "'");
        a.kind = *kind;
        a.duration_slots = static_cast<int>(row.integer("duration_slots"));
        auto slot = [&](const char* col) {
            const auto v = row.integer(col);
            if (v < 1 || v > kSlotsPerDay) row.fail(std::string(col) + " " + std::to_string(v) + " outside 1..48");
            return static_cast<int>(v - 1);
        };
        a.window = {slot("window_start"), slot("window_end")};
        a.preferred_start = slot("preferred_start");
        const auto shift = row.integer("max_shift");
        if (shift < 0 || shift >= kSlotsPerDay) row.fail("max_shift must lie in 0..47");
        a.preference_shift.fill(static_cast<int>(shift));
        const std::string where = table.name() + ":" + std::to_string(row.line) + " column power_csv";
        for (auto field : csv::split(row.text("power_csv"), ';')) a.power_profile.push_back(csv::parse_number(field, where));
        a.count = static_cast<int>(row.integer("count"));
        try {
            a.validate();
        } catch (const Error& e) {
            rethrow_with_context(e, table.name() + ":" + std::to_string(row.line));
        }
        out.push_back(std::move(a));
    }
    if (out.empty()) throw Error(ErrorKind::format, table.name() + ": no appliance rows");
    return out;
}

std::string curve_csv(const LoadCurve& c) {
    std::string out = "slot,value_kw\n";
    for (int t = 0; t < kSlotsPerDay; ++t) out += std::to_string(t + 1) + "," + format_double(c[t]) + "\n";
    return out;
}

LoadCurve read_curve(const fs::path& path) {
    static constexpr std::string_view cols[] = {"slot", "value_kw"};
    const auto table = csv::Table::read(path, cols);
    SlotValues v{};
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto row = table.row(i);
        if (i >= static_cast<std::size_t>(kSlotsPerDay)) row.fail("more than 48 slot rows");
        if (row.integer("slot") != static_cast<long long>(i + 1))
            row.fail("expected slot " + std::to_string(i + 1) + ", found " + row.text("slot"));
        v[i] = row.number("value_kw");
        if (v[i] < 0.0) row.fail("value_kw must be >= 0");
    }
    if (table.size() == 0) throw Error(ErrorKind::format, table.name() + ": curve has no slot rows, expected 48");
    if (table.size() != static_cast<std::size_t>(kSlotsPerDay))
        table.row(table.size() - 1).fail("curve ends after slot " + std::to_string(table.size()) + ", expected 48 rows");
    return LoadCurve(v);
}

std::string daily_csv(const std::vector<DailyCurve>& days) {
    std::string out = "date,slot,value_kw\n";
    for (const auto& d : days) {
        const auto date = format_date(d.date);
        for (int t = 0; t < kSlotsPerDay; ++t)
            out += date + "," + std::to_string(t + 1) + "," + format_double(d.curve[t]) + "\n";
    }
    return out;
}

std::vector<DailyCurve> read_daily(const fs::path& path) {
    static constexpr std::string_view cols[] = {"date", "slot", "value_kw"};
    const auto table = csv::Table::read(path, cols);
    std::vector<DailyCurve> out;
    std::size_t i = 0;
    while (i < table.size()) {
        const auto first = table.row(i);
        const auto date = parse_date(first.text("date"));
        if (!date) first.fail("invalid date '" + first.text("date") + "'");
        SlotValues v{};
        int count = 0;
        while (i < table.size() && table.row(i).text("date") == first.text("date")) {
            const auto row = table.row(i);
            if (count >= kSlotsPerDay) row.fail("day " + first.text("date") + " has more than 48 slot rows");
            if (row.integer("slot") != count + 1)
                row.fail("expected slot " + std::to_string(count + 1) + ", found " + row.text("slot"));
            v[static_cast<std::size_t>(count)] = row.number("value_kw");
            if (v[static_cast<std::size_t>(count)] < 0.0) row.fail("value_kw must be >= 0");
            ++count;
            ++i;
        }
        if (count != kSlotsPerDay)
            first.fail("day " + first.text("date") + " has " + std::to_string(count) + " slot rows, expected 48");
        if (!out.empty() && !(out.back().date < *date)) first.fail("dates must be strictly ascending");
        out.push_back({*date, LoadCurve(v)});
    }
    return out;
}

json read_manifest(const fs::path& dir) {
    const auto path = dir / "manifest.json";
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::format, "manifest.json: " + std::string(e.what()));
    }
}

std::string household_dir(const std::string& id) { return "households/" + id + "/"; }

}  // namespace

// ---------------------------------------------------------------------------
// Bundle

void export_bundle(const FleetConfig& fleet, const fs::path& dir) {
    fleet.validate();
    fs::create_directories(dir);
    json households = json::array();
    for (const auto& h : fleet.households) {
        const auto base = household_dir(h.id);
        json entry = {{"id", h.id}, {"appliances", base + "appliances.csv"}, {"history", base + "history.csv"}};
        csv::write_file(dir / (base + "appliances.csv"), appliances_csv(h.appliances));
        csv::write_file(dir / (base + "history.csv"), daily_csv(h.history));
        if (h.pv) {
            json pv = {{"profile", base + "pv_profile.csv"},
                       {"battery_capacity_kwh", h.pv->battery_capacity_kwh},
                       {"initial_soc_kwh", h.pv->initial_soc_kwh},
                       {"charge_rate_kw", h.pv->charge_rate_kw},
                       {"charge_efficiency", h.pv->charge_efficiency}};
            csv::write_file(dir / (base + "pv_profile.csv"), curve_csv(h.pv->generation));
            if (!h.pv_history.empty()) {
                pv["history"] = base + "pv_history.csv";
                csv::write_file(dir / (base + "pv_history.csv"), daily_csv(h.pv_history));
            }
            entry["pv"] = pv;
        }
        households.push_back(entry);
    }
    json days = json::array();
    for (const auto& d : fleet.days) days.push_back(format_date(d));
    json manifest = {{"format", kBundleFormat},
                     {"pricing", "pricing.csv"},
                     {"days", days},
                     {"mode", fleet.mode == objective::ObjectiveMode::online ? "online" : "offline"},
                     {"settings", to_json(fleet.settings)},
                     {"households", households}};
    if (fleet.recipe) manifest["recipe"] = to_json(*fleet.recipe);
    csv::write_file(dir / "pricing.csv", pricing_csv(fleet.pricing));
    csv::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

namespace {

// Shared by ingest and lint: `issue` either throws or records.
template <typename Issue>
FleetConfig load_bundle(const fs::path& dir, Issue&& issue) {
    const json m = read_manifest(dir);
    FleetConfig fleet;
    auto guarded = [&](const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            issue(where, e);
        } catch (const json::exception& e) {
            issue(where, Error(ErrorKind::format, e.what()));
        }
    };
    guarded("manifest.json", [&] {
        check_keys(m, {"format", "pricing", "days", "mode", "settings", "households", "recipe"}, "manifest.json");
        if (m.value("format", "") != kBundleFormat)
            throw Error(ErrorKind::format, std::string("format must be '") + kBundleFormat + "'");
    });
    guarded("manifest.json", [&] {
        const auto mode = m.value("mode", "offline");
        if (mode == "offline") fleet.mode = objective::ObjectiveMode::offline;
        else if (mode == "online") fleet.mode = objective::ObjectiveMode::online;
        else throw Error(ErrorKind::config, "mode must be 'offline' or 'online'");
        if (!m.contains("days") || !m.at("days").is_array()) throw Error(ErrorKind::format, "missing 'days' list");
        for (const auto& d : m.at("days")) fleet.days.push_back(date_from(d, "manifest.json days"));
        if (m.contains("settings")) fleet.settings = settings_from_json(m.at("settings"));
        if (m.contains("recipe")) fleet.recipe = recipe_from_json(m.at("recipe"));
    });
    guarded("manifest.json", [&] {
        if (!m.contains("pricing")) throw Error(ErrorKind::format, "missing 'pricing'");
        fleet.pricing = read_pricing(dir / m.at("pricing").get<std::string>());
    });
    if (!m.contains("households") || !m.at("households").is_array()) {
        issue("manifest.json", Error(ErrorKind::format, "missing 'households' list"));
        return fleet;
    }
    bool dropped = false;
    for (const auto& entry : m.at("households")) {
        Household h;
        bool ok = true;
        const std::string where = "manifest.json household " + entry.value("id", std::string("?"));
        auto step = [&](auto&& fn) {
            guarded(where, [&] {
                try {
                    fn();
                } catch (...) {
                    ok = false;
                    throw;
                }
            });
        };
        step([&] {
            check_keys(entry, {"id", "appliances", "history", "pv"}, where);
            h.id = entry.at("id").get<std::string>();
            h.appliances = read_appliances(dir / entry.at("appliances").get<std::string>());
        });
        step([&] {
            if (entry.contains("history")) h.history = read_daily(dir / entry.at("history").get<std::string>());
        });
        step([&] {
            if (!entry.contains("pv")) return;
            const auto& pv = entry.at("pv");
            check_keys(pv, {"profile", "history", "battery_capacity_kwh", "initial_soc_kwh", "charge_rate_kw",
                            "charge_efficiency"},
                       where + " pv");
            PvSystem sys;
            sys.generation = read_curve(dir / pv.at("profile").get<std::string>());
            sys.battery_capacity_kwh = pv.at("battery_capacity_kwh").get<double>();
            sys.initial_soc_kwh = pv.value("initial_soc_kwh", 0.0);
            sys.charge_rate_kw = pv.value("charge_rate_kw", 1.0);
            sys.charge_efficiency = pv.value("charge_efficiency", 1.0);
            sys.validate();
            h.pv = sys;
            if (pv.contains("history")) h.pv_history = read_daily(dir / pv.at("history").get<std::string>());
        });
        if (ok) {
            guarded(where, [&] { h.validate(); });
            fleet.households.push_back(std::move(h));
        } else {
            dropped = true;
        }
    }
    // A dropped household was already reported; fleet checks would only echo it.
    if (!dropped) guarded("manifest.json", [&] { fleet.validate(); });
    return fleet;
}

}  // namespace

FleetConfig ingest(const fs::path& dir) {
    return load_bundle(dir, [](const std::string&, const Error& e) { throw e; });
}

std::vector<LintIssue> lint_bundle(const fs::path& dir) {
    std::vector<LintIssue> issues;
    try {
        load_bundle(dir, [&](const std::string& where, const Error& e) {
            issues.push_back({where, std::string(to_string(e.kind())) + ": " + e.what()});
        });
    } catch (const Error& e) {
        issues.push_back({(dir / "manifest.json").string(), std::string(to_string(e.kind())) + ": " + e.what()});
    }
    return issues;
}

}  // namespace drm::harness
