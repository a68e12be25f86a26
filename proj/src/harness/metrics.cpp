#include "csv.hpp"

#include "drm/curve_ops.hpp"
#include "drm/error.hpp"
#include "drm/harness.hpp"

#include <array>

namespace drm::harness {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<const char*, 6> kPeriodLabels = {"Jan-Feb", "Mar-Apr", "May-Jun", "Jul-Aug", "Sep-Oct", "Nov-Dec"};

int period_of(const Date& d) { return static_cast<int>((static_cast<unsigned>(d.month()) - 1) / 2); }

double peak_energy(const LoadCurve& c, const PricingSignal& pricing) {
    double e = 0.0;
    for (int t = 0; t < kSlotsPerDay; ++t)
        if (pricing.is_peak(t)) e += c[t] * kSlotHours;
    return e;
}

double pct_change(double before, double after) { return (after - before) / before * 100.0; }

ojson aggregate_json(const Aggregate& a) {
    ojson j;
    j["household_days"] = a.household_days;
    j["peak_before_kwh"] = a.peak_before_kwh;
    j["peak_after_kwh"] = a.peak_after_kwh;
    j["peak_reduction_pct"] = a.peak_reduction_pct;
    j["load_factor_before"] = a.load_factor_before;
    j["load_factor_after"] = a.load_factor_after;
    j["load_factor_improvement_pct"] = a.load_factor_improvement_pct;
    j["load_factor_improved_days"] = a.load_factor_improved_days;
    j["bill_before"] = a.bill_before;
    j["bill_after"] = a.bill_after;
    j["bill_reduction_pct"] = a.bill_reduction_pct;
    j["energy_kwh"] = a.energy_kwh;
    return j;
}

const char* kAggregateHeader =
    "household_days,peak_before_kwh,peak_after_kwh,peak_reduction_pct,load_factor_before,load_factor_after,"
    "load_factor_improvement_pct,load_factor_improved_days,bill_before,bill_after,bill_reduction_pct,energy_kwh";

std::string aggregate_csv(const Aggregate& a) {
    return std::to_string(a.household_days) + "," + format_double(a.peak_before_kwh) + "," +
           format_double(a.peak_after_kwh) + "," + format_double(a.peak_reduction_pct) + "," +
           format_double(a.load_factor_before) + "," + format_double(a.load_factor_after) + "," +
           format_double(a.load_factor_improvement_pct) + "," + std::to_string(a.load_factor_improved_days) + "," +
           format_double(a.bill_before) + "," + format_double(a.bill_after) + "," +
           format_double(a.bill_reduction_pct) + "," + format_double(a.energy_kwh);
}

}  // namespace

DayMetrics day_metrics(const DayCurves& day, const PricingSignal& pricing) {
    DayMetrics m;
    m.household_id = day.household_id;
    m.date = day.date;
    m.peak_before_kwh = peak_energy(day.before, pricing);
    m.peak_after_kwh = peak_energy(day.after, pricing);
    m.load_factor_before = load_factor(day.before);
    m.load_factor_after = load_factor(day.after);
    m.bill_before = bill(day.before, pricing);
    m.bill_after = bill(day.after, pricing);
    m.energy_before_kwh = day.before.total_energy_kwh();
    m.energy_after_kwh = day.after_all.total_energy_kwh();
    return m;
}

Aggregate household_aggregate(std::span<const DayMetrics> days) {
    if (days.empty()) throw Error(ErrorKind::undefined_metric, "no household-days to aggregate");
    Aggregate a;
    for (const auto& d : days) {
        ++a.household_days;
        a.peak_before_kwh += d.peak_before_kwh;
        a.peak_after_kwh += d.peak_after_kwh;
        a.load_factor_before += d.load_factor_before;
        a.load_factor_after += d.load_factor_after;
        a.bill_before += d.bill_before;
        a.bill_after += d.bill_after;
        a.energy_kwh += d.energy_before_kwh;
        if (d.load_factor_after > d.load_factor_before) ++a.load_factor_improved_days;
    }
    if (!(a.peak_before_kwh > 0.0))
        throw Error(ErrorKind::undefined_metric, "no peak-window consumption before scheduling");
    a.load_factor_before /= a.household_days;
    a.load_factor_after /= a.household_days;
    a.peak_reduction_pct = (a.peak_before_kwh - a.peak_after_kwh) / a.peak_before_kwh * 100.0;
    a.load_factor_improvement_pct = pct_change(a.load_factor_before, a.load_factor_after);
    a.bill_reduction_pct = a.bill_before > 0.0 ? (a.bill_before - a.bill_after) / a.bill_before * 100.0 : 0.0;
    return a;
}

Aggregate fleet_aggregate(std::span<const Aggregate> households) {
    Aggregate f;
    double peak_w = 0.0;
    double energy_w = 0.0;
    for (const auto& h : households) {
        f.household_days += h.household_days;
        f.peak_before_kwh += h.peak_before_kwh;
        f.peak_after_kwh += h.peak_after_kwh;
        f.bill_before += h.bill_before;
        f.bill_after += h.bill_after;
        f.energy_kwh += h.energy_kwh;
        f.load_factor_improved_days += h.load_factor_improved_days;
        f.peak_reduction_pct += h.peak_before_kwh * h.peak_reduction_pct;
        f.load_factor_before += h.energy_kwh * h.load_factor_before;
        f.load_factor_after += h.energy_kwh * h.load_factor_after;
        f.load_factor_improvement_pct += h.energy_kwh * h.load_factor_improvement_pct;
        f.bill_reduction_pct += h.energy_kwh * h.bill_reduction_pct;
        peak_w += h.peak_before_kwh;
        energy_w += h.energy_kwh;
    }
    if (peak_w > 0.0) f.peak_reduction_pct /= peak_w;
    if (energy_w > 0.0) {
        f.load_factor_before /= energy_w;
        f.load_factor_after /= energy_w;
        f.load_factor_improvement_pct /= energy_w;
        f.bill_reduction_pct /= energy_w;
    }
    return f;
}

MetricsReport compute_metrics(std::span<const DayCurves> days, const PricingSignal& pricing) {
    pricing.validate();
    MetricsReport report;

    // Group by household, keeping first-seen order.
    std::vector<std::string> order;
    std::vector<std::vector<const DayCurves*>> groups;
    for (const auto& d : days) {
        const auto it = std::find(order.begin(), order.end(), d.household_id);
        if (it == order.end()) {
            order.push_back(d.household_id);
            groups.push_back({&d});
        } else {
            groups[static_cast<std::size_t>(it - order.begin())].push_back(&d);
        }
    }

    std::vector<std::vector<DayMetrics>> kept;
    std::vector<Aggregate> included;
    for (std::size_t h = 0; h < order.size(); ++h) {
        HouseholdMetrics hm;
        hm.household_id = order[h];
        std::vector<DayMetrics> dm;
        try {
            for (const auto* d : groups[h]) dm.push_back(day_metrics(*d, pricing));
            hm.metrics = household_aggregate(dm);
            included.push_back(hm.metrics);
            kept.push_back(dm);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::undefined_metric) throw;
            hm.excluded = true;
            report.warnings.push_back("household " + hm.household_id + " excluded: " + e.what());
        }
        for (auto& d : dm) report.days.push_back(d);
        report.households.push_back(std::move(hm));
    }
    report.fleet = fleet_aggregate(included);

    for (int p = 0; p < static_cast<int>(kPeriodLabels.size()); ++p) {
        std::vector<Aggregate> parts;
        for (const auto& dm : kept) {
            std::vector<DayMetrics> in_period;
            for (const auto& d : dm)
                if (period_of(d.date) == p) in_period.push_back(d);
            if (in_period.empty()) continue;
            try {
                parts.push_back(household_aggregate(in_period));
            } catch (const Error& e) {
                report.warnings.push_back("household " + in_period.front().household_id + " skipped in " +
                                          kPeriodLabels[static_cast<std::size_t>(p)] + ": " + e.what());
            }
        }
        if (parts.empty()) continue;
        report.periods.push_back({kPeriodLabels[static_cast<std::size_t>(p)], static_cast<int>(parts.size()),
                                  fleet_aggregate(parts)});
    }
    return report;
}

ojson report_json(const MetricsReport& r) {
    ojson out;
    out["format"] = kReportFormat;
    out["fleet"] = aggregate_json(r.fleet);
    out["fleet"]["households"] = static_cast<int>(
        std::count_if(r.households.begin(), r.households.end(), [](const auto& h) { return !h.excluded; }));
    ojson periods = ojson::array();
    for (const auto& p : r.periods) {
        ojson j;
        j["period"] = p.label;
        j["households"] = p.households;
        j.update(aggregate_json(p.metrics));
        periods.push_back(std::move(j));
    }
    out["periods"] = std::move(periods);
    ojson households = ojson::array();
    for (const auto& h : r.households) {
        ojson j;
        j["household"] = h.household_id;
        j["excluded"] = h.excluded;
        if (!h.excluded) j.update(aggregate_json(h.metrics));
        households.push_back(std::move(j));
    }
    out["households"] = std::move(households);
    ojson days = ojson::array();
    for (const auto& d : r.days) {
        ojson j;
        j["household"] = d.household_id;
        j["date"] = format_date(d.date);
        j["peak_before_kwh"] = d.peak_before_kwh;
        j["peak_after_kwh"] = d.peak_after_kwh;
        j["load_factor_before"] = d.load_factor_before;
        j["load_factor_after"] = d.load_factor_after;
        j["bill_before"] = d.bill_before;
        j["bill_after"] = d.bill_after;
        j["energy_before_kwh"] = d.energy_before_kwh;
        j["energy_after_kwh"] = d.energy_after_kwh;
        days.push_back(std::move(j));
    }
    out["days"] = std::move(days);
    out["warnings"] = r.warnings;
    return out;
}

std::string days_csv(const MetricsReport& r) {
    std::string out =
        "household,date,peak_before_kwh,peak_after_kwh,load_factor_before,load_factor_after,bill_before,bill_after,"
        "energy_before_kwh,energy_after_kwh\n";
    for (const auto& d : r.days)
        out += d.household_id + "," + format_date(d.date) + "," + format_double(d.peak_before_kwh) + "," +
               format_double(d.peak_after_kwh) + "," + format_double(d.load_factor_before) + "," +
               format_double(d.load_factor_after) + "," + format_double(d.bill_before) + "," +
               format_double(d.bill_after) + "," + format_double(d.energy_before_kwh) + "," +
               format_double(d.energy_after_kwh) + "\n";
    return out;
}

std::string households_csv(const MetricsReport& r) {
    std::string out = std::string("household,excluded,") + kAggregateHeader + "\n";
    for (const auto& h : r.households)
        out += h.household_id + "," + (h.excluded ? "1" : "0") + "," + aggregate_csv(h.metrics) + "\n";
    out += std::string("fleet,0,") + aggregate_csv(r.fleet) + "\n";
    return out;
}

std::string periods_csv(const MetricsReport& r) {
    std::string out = std::string("period,households,") + kAggregateHeader + "\n";
    for (const auto& p : r.periods)
        out += p.label + "," + std::to_string(p.households) + "," + aggregate_csv(p.metrics) + "\n";
    return out;
}

void write_report(const MetricsReport& report, const std::filesystem::path& out_dir) {
    csv::write_file(out_dir / "report.json", report_json(report).dump(2) + "\n");
    csv::write_file(out_dir / "days.csv", days_csv(report));
    csv::write_file(out_dir / "households.csv", households_csv(report));
    csv::write_file(out_dir / "periods.csv", periods_csv(report));
}

}  // namespace drm::harness
