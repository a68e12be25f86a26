#pragma once

// Domain types shared across the engine: the half-hour day grid, per-slot
// load curves, appliances, tariffs, PV/battery systems and households.
//
// Slots are 0-based everywhere inside the library. External files and
// reports use 1..48; convert with slot_from_external / slot_to_external.

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drm {

inline constexpr int kSlotsPerDay = 48;
inline constexpr int kSlotMinutes = 30;
inline constexpr double kSlotHours = 0.5;
static_assert(kSlotsPerDay * kSlotMinutes == 24 * 60, "grid must cover one day");

using SlotValues = std::array<double, kSlotsPerDay>;
using SlotFlags = std::array<bool, kSlotsPerDay>;
using Date = std::chrono::year_month_day;

/// 1..48 -> 0..47; throws ErrorKind::format outside the grid.
int slot_from_external(int external);
/// 0..47 -> 1..48; throws ErrorKind::parameter outside the grid.
int slot_to_external(int internal);

std::string format_date(const Date& d);
/// Parses YYYY-MM-DD; returns nullopt on malformed or invalid dates.
std::optional<Date> parse_date(std::string_view text);

/// Inclusive slot range [first, last].
struct SlotInterval {
    int first = 0;
    int last = 0;

    int length() const { return last - first + 1; }
    bool contains(int slot) const { return slot >= first && slot <= last; }
    bool operator==(const SlotInterval&) const = default;
};

/// 48 non-negative, finite per-slot powers in kW.
class LoadCurve {
public:
    LoadCurve() { values_.fill(0.0); }
    explicit LoadCurve(const SlotValues& values);

    /// Length-checked construction from arbitrary storage.
    static LoadCurve from_span(std::span<const double> values);
    static LoadCurve constant(double kw);

    double operator[](int slot) const { return values_[static_cast<std::size_t>(slot)]; }
    const SlotValues& values() const { return values_; }
    std::span<const double> span() const { return values_; }

    double total_energy_kwh() const;
    double peak() const;
    double mean() const;

    LoadCurve operator+(const LoadCurve& other) const;
    LoadCurve scaled(double factor) const;

    bool operator==(const LoadCurve&) const = default;

private:
    SlotValues values_;
};

enum class ApplianceKind { fixed, shiftable };

std::string_view to_string(ApplianceKind kind);
std::optional<ApplianceKind> parse_appliance_kind(std::string_view text);

/// A device type as declared by the household.
///
/// `preference_shift[t]` is the largest shift (in slots) the customer accepts
/// when the device would normally start at slot t. Only the entry at the
/// preferred start matters for placement; the full row is kept because the
/// customer supplies it per slot.
struct ApplianceSpec {
    std::string id;
    ApplianceKind kind = ApplianceKind::fixed;
    std::vector<double> power_profile;  // kW per slot of the run
    int duration_slots = 1;
    SlotInterval window;
    int preferred_start = 0;
    std::array<int, kSlotsPerDay> preference_shift{};
    int count = 1;

    /// Throws ErrorKind::config naming the broken invariant.
    void validate() const;

    double energy_kwh() const;
    int max_shift() const { return preference_shift[static_cast<std::size_t>(preferred_start)]; }

    /// Fixed device pinned at `start`; window and shifts derived.
    static ApplianceSpec make_fixed(std::string id, std::vector<double> profile, int start,
                                    int count = 1);
    /// Shiftable device with a uniform preference row of `max_shift`.
    static ApplianceSpec make_shiftable(std::string id, std::vector<double> profile,
                                        SlotInterval window, int preferred_start, int max_shift,
                                        int count = 1);

    bool operator==(const ApplianceSpec&) const = default;
};

/// One physical device after expanding `count`.
struct ApplianceInstance {
    std::string instance_id;  // "<id>" when count == 1, else "<id>#k"
    ApplianceSpec spec;       // spec.count == 1, spec.id is the type id
};

/// Expands device counts into independent identical instances.
std::vector<ApplianceInstance> expand_instances(std::span<const ApplianceSpec> appliances);

struct PricingSignal {
    SlotValues price_per_slot{};  // currency per kWh
    std::vector<SlotInterval> peak_windows;

    void validate() const;
    bool is_peak(int slot) const;
    SlotFlags peak_mask() const;

    static PricingSignal flat(double price);

    bool operator==(const PricingSignal&) const = default;
};

struct PvSystem {
    LoadCurve generation;  // kW per slot
    double battery_capacity_kwh = 0.0;
    double initial_soc_kwh = 0.0;
    double charge_rate_kw = 1.0;
    double charge_efficiency = 1.0;

    void validate() const;
    bool operator==(const PvSystem&) const = default;
};

struct DailyCurve {
    Date date;
    LoadCurve curve;

    bool operator==(const DailyCurve&) const = default;
};

struct Household {
    std::string id;
    std::vector<ApplianceSpec> appliances;
    std::optional<PvSystem> pv;
    std::vector<DailyCurve> history;     // realized consumption, date-ascending
    std::vector<DailyCurve> pv_history;  // realized generation, date-ascending

    void validate() const;
    bool operator==(const Household&) const = default;
};

}  // namespace drm
