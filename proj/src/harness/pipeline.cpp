#include "drm/curve_ops.hpp"
#include "drm/error.hpp"
#include "drm/harness.hpp"
#include "drm/rng.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace drm::harness {

using nlohmann::json;

namespace {

std::vector<DailyCurve> days_before(std::span<const DailyCurve> days, Date cutoff) {
    std::vector<DailyCurve> out;
    for (const auto& d : days)
        if (d.date < cutoff) out.push_back(d);
    return out;
}

// Hourly averages of the trailing days, enough to fill one input window.
std::vector<double> hourly_tail(std::span<const DailyCurve> days, int lag) {
    const std::size_t need = static_cast<std::size_t>((lag + 23) / 24);
    const std::size_t from = days.size() > need ? days.size() - need : 0;
    std::vector<double> out;
    for (std::size_t i = from; i < days.size(); ++i)
        for (int h = 0; h < 24; ++h) out.push_back(0.5 * (days[i].curve[2 * h] + days[i].curve[2 * h + 1]));
    return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return Rng::derived(seed, stream).next_u64(); }

json curve_json(const LoadCurve& c) { return json(c.values()); }

}  // namespace

HouseholdModels train_household(const Household& household, const PricingSignal& pricing,
                                const FleetSettings& settings, Date first_day, std::uint64_t seed) {
    try {
        const auto history = days_before(household.history, first_day);
        if (history.size() < 2)
            throw Error(ErrorKind::dataset_too_small, "need at least two days of history before " + format_date(first_day));
        HouseholdModels m;
        auto cfg = settings.training;
        cfg.rng_seed = stream_seed(seed, 0);
        const auto fit = forecast::fit_forecaster(forecast::SeriesDataset::hourly_from_days(history, cfg.input_size), cfg);
        m.load = fit.model;
        m.load_test_mse = fit.test_mse;
        m.load_persistence_mse = fit.persistence_test_mse;

        if (household.pv) {
            const auto pv_history = days_before(household.pv_history, first_day);
            if (pv_history.size() >= 2) {
                cfg.rng_seed = stream_seed(seed, 1);
                m.pv = forecast::fit_forecaster(forecast::SeriesDataset::hourly_from_days(pv_history, cfg.input_size), cfg)
                           .model;
            }
        }

        std::vector<LoadCurve> curves;
        for (const auto& d : history) curves.push_back(d.curve);
        m.regression = objective::fit_peak_regression(curves, pricing, settings.regression_segments,
                                                      settings.regression_degree);
        if (settings.l_min) {
            m.l_min = *settings.l_min;
        } else {
            const auto segments = objective::offpeak_segments(pricing, settings.regression_segments);
            double total = 0.0;
            for (const auto& c : curves)
                for (double v : objective::segment_means(c, segments)) total += v;
            m.l_min = total / static_cast<double>(curves.size());
            if (!(m.l_min > 0.0))
                throw Error(ErrorKind::undefined_metric, "historical off-peak consumption is zero; set l_min explicitly");
        }
        return m;
    } catch (const Error& e) {
        rethrow_with_context(e, "household " + household.id);
    }
}

json to_json(const HouseholdModels& m) {
    return {{"format", "drm-household-models/1"},
            {"load", forecast::to_json(m.load)},
            {"pv", m.pv ? forecast::to_json(*m.pv) : json(nullptr)},
            {"regression", objective::to_json(m.regression)},
            {"l_min", m.l_min},
            {"load_test_mse", m.load_test_mse},
            {"load_persistence_mse", m.load_persistence_mse}};
}

HouseholdModels household_models_from_json(const json& j) {
    try {
        if (j.at("format") != "drm-household-models/1") throw Error(ErrorKind::format, "unexpected model format");
        HouseholdModels m;
        m.load = forecast::model_from_json(j.at("load"));
        if (!j.at("pv").is_null()) m.pv = forecast::model_from_json(j.at("pv"));
        m.regression = objective::regression_from_json(j.at("regression"));
        m.l_min = j.at("l_min").get<double>();
        m.load_test_mse = j.value("load_test_mse", 0.0);
        m.load_persistence_mse = j.value("load_persistence_mse", 0.0);
        if (!(m.l_min > 0.0)) throw Error(ErrorKind::format, "l_min must be > 0");
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("household models: ") + e.what());
    }
}

DayResult run_day(const Household& household, const HouseholdModels& models, const PricingSignal& pricing, Date date,
                  objective::ObjectiveMode mode, const FleetSettings& settings, std::uint64_t seed) {
    try {
        const auto history = days_before(household.history, date);
        const Date yesterday{std::chrono::sys_days{date} - std::chrono::days{1}};
        if (history.empty() || history.back().date != yesterday)
            throw Error(ErrorKind::dataset_too_small, "no recorded consumption for " + format_date(yesterday));

        DayResult r;
        r.household_id = household.id;
        r.date = date;
        r.predicted = forecast::predict_day(models.load, hourly_tail(history, models.load.network.input_size()));

        std::optional<PvSystem> pv = household.pv;
        if (pv && models.pv) {
            const auto pv_history = days_before(household.pv_history, date);
            const auto tail = hourly_tail(pv_history, models.pv->network.input_size());
            if (tail.size() >= static_cast<std::size_t>(models.pv->network.input_size()))
                pv->generation = forecast::predict_day(*models.pv, tail);
        }

        auto objective = objective::build_objective(r.predicted, pricing, models.regression, models.l_min,
                                                    history.back().curve);
        auto problem = scheduler::SchedulingProblem::make(household.appliances, objective.values, pricing, pv,
                                                          settings.discomfort, settings.discomfort_blend);

        std::vector<ApplianceInstance> all;
        std::vector<int> preferred;
        for (const auto& f : problem.fixed) {
            all.push_back(f);
            preferred.push_back(f.spec.preferred_start);
        }
        for (const auto& s : problem.shiftable) {
            all.push_back(s);
            preferred.push_back(s.spec.preferred_start);
        }
        r.before = total_curve(all, preferred);
        const double before_bill = bill(r.before, pricing);
        if (settings.no_harm) problem.max_grid_bill = before_bill;

        auto solver = settings.solver;
        solver.seed = stream_seed(seed, 0);
        auto solved = scheduler::solve(problem, solver);
        r.solves = 1;

        if (mode == objective::ObjectiveMode::online) {
            Rng noise = Rng::derived(seed, 1);
            SlotValues observed{};
            for (int t = 0; t < kSlotsPerDay; ++t)
                observed[static_cast<std::size_t>(t)] =
                    r.predicted[t] * std::max(0.0, 1.0 + settings.online_noise * noise.normal());
            for (int slot_now = 2; slot_now <= kSlotsPerDay; ++slot_now) {
                const int current = slot_now - 1;
                objective = objective::update_online(
                    objective, std::span<const double>(observed.data(), static_cast<std::size_t>(current)), pricing,
                    slot_now);
                const auto& plan = solved.assignment;
                auto step = problem;
                step.objective = objective.values;
                step.earliest_start = current;
                for (std::size_t i = 0; i < step.shiftable.size(); ++i)
                    if (plan.starts[i] < current) step.pinned[i] = plan.starts[i];
                step.frozen_pv_flags.assign(plan.pv_flags.begin(), plan.pv_flags.begin() + current);
                if (settings.no_harm) {
                    // The standing plan stays admissible even when routing
                    // changes as devices start.
                    step.max_grid_bill = std::nullopt;
                    const auto kept = scheduler::make_assignment(step, plan.starts);
                    step.max_grid_bill =
                        std::max(before_bill, bill(scheduler::scheduled_curves(step, kept).grid, pricing));
                }
                solver.seed = stream_seed(seed, static_cast<std::uint64_t>(slot_now));
                solved = scheduler::solve(step, solver);
                problem = std::move(step);
                ++r.solves;
            }
        }

        const auto curves = scheduler::scheduled_curves(problem, solved.assignment);
        r.after = curves.grid;
        r.after_all = curves.all;
        r.pv_supplied = curves.pv_supplied;
        r.objective = objective.values;
        r.assignment = solved.assignment;
        r.assignment_json = scheduler::to_json(problem, solved.assignment);
        r.cost = solved.cost;
        r.method = solved.method;
        return r;
    } catch (const Error& e) {
        rethrow_with_context(e, "household " + household.id + " on " + format_date(date));
    }
}

namespace {

// Runs fn(i) for i in [0, n) on a pool; rethrows the failure with the lowest
// index so errors do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int requested_threads, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = requested_threads > 0 ? static_cast<unsigned>(requested_threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::uint64_t household_seed(const FleetConfig& fleet, std::size_t i) { return stream_seed(fleet.settings.seed, i); }

}  // namespace

std::map<std::string, HouseholdModels> train_fleet(const FleetConfig& fleet) {
    fleet.validate();
    std::vector<HouseholdModels> trained(fleet.households.size());
    parallel_for(trained.size(), fleet.settings.threads, [&](std::size_t i) {
        trained[i] = train_household(fleet.households[i], fleet.pricing, fleet.settings, fleet.days.front(),
                                     stream_seed(household_seed(fleet, i), 0));
    });
    std::map<std::string, HouseholdModels> out;
    for (std::size_t i = 0; i < trained.size(); ++i) out.emplace(fleet.households[i].id, std::move(trained[i]));
    return out;
}

FleetResult run_fleet(const FleetConfig& fleet, const std::map<std::string, HouseholdModels>* models) {
    fleet.validate();
    std::vector<std::vector<DayResult>> per_household(fleet.households.size());
    parallel_for(per_household.size(), fleet.settings.threads, [&](std::size_t i) {
        const auto& h = fleet.households[i];
        const std::uint64_t seed = household_seed(fleet, i);
        HouseholdModels trained;
        const HouseholdModels* m = nullptr;
        if (models) {
            const auto it = models->find(h.id);
            if (it == models->end()) throw Error(ErrorKind::config, "no trained models for household " + h.id);
            m = &it->second;
        } else {
            trained = train_household(h, fleet.pricing, fleet.settings, fleet.days.front(), stream_seed(seed, 0));
            m = &trained;
        }
        for (std::size_t d = 0; d < fleet.days.size(); ++d)
            per_household[i].push_back(
                run_day(h, *m, fleet.pricing, fleet.days[d], fleet.mode, fleet.settings, stream_seed(seed, d + 1)));
    });
    FleetResult result;
    for (auto& days : per_household)
        for (auto& d : days) result.days.push_back(std::move(d));
    return result;
}

static json pricing_json(const PricingSignal& p) {
    json windows = json::array();
    for (const auto& w : p.peak_windows) windows.push_back({w.first + 1, w.last + 1});
    return {{"price_per_kwh", json(p.price_per_slot)}, {"peak_windows", windows}};
}

nlohmann::ordered_json results_json(const FleetConfig& fleet, const FleetResult& result) {
    nlohmann::ordered_json days = nlohmann::ordered_json::array();
    for (const auto& d : result.days) {
        nlohmann::ordered_json entry;
        entry["household"] = d.household_id;
        entry["date"] = format_date(d.date);
        entry["method"] = std::string(scheduler::to_string(d.method));
        entry["solves"] = d.solves;
        entry["cost"] = {{"deviation", d.cost.deviation},
                         {"discomfort", d.cost.discomfort},
                         {"blend", d.cost.blend},
                         {"total", d.cost.total}};
        entry["before_kw"] = curve_json(d.before);
        entry["after_kw"] = curve_json(d.after);
        entry["after_all_kw"] = curve_json(d.after_all);
        entry["pv_supplied_kw"] = curve_json(d.pv_supplied);
        entry["predicted_kw"] = curve_json(d.predicted);
        entry["objective_kw"] = curve_json(d.objective);
        entry["assignment"] = d.assignment_json;
        days.push_back(std::move(entry));
    }
    nlohmann::ordered_json out;
    out["format"] = kResultsFormat;
    out["mode"] = fleet.mode == objective::ObjectiveMode::online ? "online" : "offline";
    out["seed"] = fleet.settings.seed;
    out["pricing"] = pricing_json(fleet.pricing);
    out["days"] = std::move(days);
    return out;
}

std::pair<std::vector<DayCurves>, PricingSignal> curves_from_results(const json& results) {
    try {
        if (results.at("format") != kResultsFormat) throw Error(ErrorKind::format, "not a results document");
        PricingSignal pricing;
        const auto prices = results.at("pricing").at("price_per_kwh").get<std::vector<double>>();
        if (prices.size() != static_cast<std::size_t>(kSlotsPerDay))
            throw Error(ErrorKind::format, "results pricing must list 48 prices");
        std::copy(prices.begin(), prices.end(), pricing.price_per_slot.begin());
        for (const auto& w : results.at("pricing").at("peak_windows"))
            pricing.peak_windows.push_back({slot_from_external(w.at(0).get<int>()), slot_from_external(w.at(1).get<int>())});
        pricing.validate();
        std::vector<DayCurves> days;
        for (const auto& d : results.at("days")) {
            const auto date = parse_date(d.at("date").get<std::string>());
            if (!date) throw Error(ErrorKind::format, "bad date in results");
            auto curve = [&](const char* key) {
                return LoadCurve::from_span(d.at(key).get<std::vector<double>>());
            };
            days.push_back({d.at("household").get<std::string>(), *date, curve("before_kw"), curve("after_kw"),
                            curve("after_all_kw")});
        }
        return {std::move(days), std::move(pricing)};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("results: ") + e.what());
    }
}

std::vector<DayCurves> day_curves(const FleetResult& result) {
    std::vector<DayCurves> out;
    for (const auto& d : result.days) out.push_back({d.household_id, d.date, d.before, d.after, d.after_all});
    return out;
}

}  // namespace drm::harness
