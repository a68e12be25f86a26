#include "drm/curve_ops.hpp"
#include "drm/error.hpp"
#include "drm/rng.hpp"
#include "evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>

namespace drm::scheduler {

namespace detail {

Evaluator::Evaluator(const SchedulingProblem& problem) : problem_(problem) {
    for (const auto& f : problem.fixed) accumulate_run(fixed_base_, f, f.spec.preferred_start);
    until_peak_ = slots_until_peak(problem.pricing);
    for (const auto& s : problem.shiftable) {
        weights_.push_back(problem.weights.for_type(s.spec.id));
        preferred_.push_back(s.spec.preferred_start);
    }
    max_pending_ = problem.max_pending_duration();
    if (problem.frozen_pv_flags.size() > frozen_.size()) throw Error(ErrorKind::shape, "more frozen PV flags than slots");
    frozen_count_ = problem.frozen_pv_flags.size();
    for (std::size_t t = 0; t < frozen_count_; ++t) frozen_[t] = problem.frozen_pv_flags[t];
}

void Evaluator::add_run(SlotValues& all, SlotValues& shift, std::size_t i, int start) const {
    const auto& spec = problem_.shiftable[i].spec;
    for (int k = 0; k < spec.duration_slots; ++k) {
        const auto t = static_cast<std::size_t>(start + k);
        const double p = spec.power_profile[static_cast<std::size_t>(k)];
        all[t] += p;
        shift[t] += p;
    }
}

double Evaluator::discomfort_term(std::size_t i, int start) const {
    const int d = start - preferred_[i];
    return weights_[i].shift * std::abs(d) + weights_[i].delay * std::max(0, d);
}

Evaluator::Score Evaluator::finish(const SlotValues& all, const SlotValues& shift, double discomfort, int abs_shift,
                                   const SlotFlags* given_flags, PvArbitration* pv_out) const {
    SlotFlags flags{};
    if (given_flags) {
        flags = *given_flags;
    } else if (problem_.pv) {
        PvArbitration arb;
        arbitrate(*problem_.pv, shift, until_peak_, max_pending_, std::span<const bool>(frozen_.data(), frozen_count_), arb);
        flags = arb.flags;
        if (pv_out) *pv_out = arb;
    } else if (pv_out) {
        *pv_out = PvArbitration{};
    }

    Score s;
    double bill_total = 0.0;
    for (std::size_t t = 0; t < static_cast<std::size_t>(kSlotsPerDay); ++t) {
        const double grid = flags[t] ? std::max(0.0, all[t] - shift[t]) : all[t];
        const double diff = grid - problem_.objective[static_cast<int>(t)];
        s.deviation += diff * diff;
        bill_total += grid * kSlotHours * problem_.pricing.price_per_slot[t];
    }
    s.discomfort = discomfort;
    s.abs_shift = abs_shift;
    s.total = s.deviation + problem_.discomfort_blend * discomfort;
    s.admissible = !problem_.max_grid_bill || bill_total <= *problem_.max_grid_bill;
    return s;
}

Evaluator::Score Evaluator::score(std::span<const int> starts, PvArbitration* pv_out) const {
    SlotValues all = fixed_base_;
    SlotValues shift{};
    double disc = 0.0;
    int abs_shift = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        add_run(all, shift, i, starts[i]);
        disc += discomfort_term(i, starts[i]);
        abs_shift += std::abs(starts[i] - preferred_[i]);
    }
    return finish(all, shift, disc, abs_shift, nullptr, pv_out);
}

Evaluator::Score Evaluator::score_with_flags(std::span<const int> starts, const SlotFlags& flags) const {
    SlotValues all = fixed_base_;
    SlotValues shift{};
    double disc = 0.0;
    int abs_shift = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        add_run(all, shift, i, starts[i]);
        disc += discomfort_term(i, starts[i]);
        abs_shift += std::abs(starts[i] - preferred_[i]);
    }
    return finish(all, shift, disc, abs_shift, &flags, nullptr);
}

bool better(const Evaluator::Score& a, std::span<const int> a_starts, const Evaluator::Score& b,
            std::span<const int> b_starts) {
    if (a.admissible != b.admissible) return a.admissible;
    if (a.total != b.total) return a.total < b.total;
    if (a.abs_shift != b.abs_shift) return a.abs_shift < b.abs_shift;
    return std::lexicographical_compare(a_starts.begin(), a_starts.end(), b_starts.begin(), b_starts.end());
}

}  // namespace detail

std::string_view to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::trivial: return "trivial";
        case SolveMethod::exhaustive: return "exhaustive";
        case SolveMethod::local_search: return "local_search";
    }
    return "unknown";
}

namespace {

using detail::Evaluator;

struct Best {
    bool found = false;
    Evaluator::Score score;
    std::vector<int> starts;

    void offer(const Evaluator::Score& s, const std::vector<int>& st) {
        if (!found || detail::better(s, st, score, starts)) {
            found = true;
            score = s;
            starts = st;
        }
    }
};

Best exhaustive(const Evaluator& ev, const std::vector<std::vector<int>>& cands, std::uint64_t& evaluations) {
    const std::size_t n = cands.size();
    std::vector<SlotValues> all(n + 1), shift(n + 1);
    std::vector<double> disc(n + 1, 0.0);
    std::vector<int> abs_shift(n + 1, 0);
    all[0] = ev.fixed_base();
    std::vector<int> cur(n, 0);
    Best best;

    std::function<void(std::size_t)> visit = [&](std::size_t d) {
        if (d == n) {
            ++evaluations;
            const auto s = ev.finish(all[n], shift[n], disc[n], abs_shift[n], nullptr, nullptr);
            if (s.admissible) best.offer(s, cur);
            return;
        }
        for (int start : cands[d]) {
            all[d + 1] = all[d];
            shift[d + 1] = shift[d];
            ev.add_run(all[d + 1], shift[d + 1], d, start);
            disc[d + 1] = disc[d] + ev.discomfort_term(d, start);
            abs_shift[d + 1] = abs_shift[d] + std::abs(start - ev.preferred(d));
            cur[d] = start;
            visit(d + 1);
        }
    };
    visit(0);
    return best;
}

struct Run {
    Best best;
    std::vector<double> trace;
};

// Steepest descent per device: each pass moves every device to its best
// start given the others, accepting strict improvements only.
Run descend(const Evaluator& ev, const std::vector<std::vector<int>>& cands, std::vector<int> cur, int max_passes,
            std::uint64_t& evaluations) {
    Run run;
    auto cur_score = ev.score(cur);
    ++evaluations;
    run.trace.push_back(cur_score.total);
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cands[i].size() < 2) continue;
            Best move;
            auto trial = cur;
            for (int start : cands[i]) {
                if (start == cur[i]) continue;
                trial[i] = start;
                const auto s = ev.score(trial);
                ++evaluations;
                move.offer(s, trial);
            }
            if (move.found && detail::better(move.score, move.starts, cur_score, cur)) {
                cur = move.starts;
                cur_score = move.score;
                run.trace.push_back(cur_score.total);
                improved = true;
            }
        }
        if (!improved) break;
    }
    run.best.found = true;
    run.best.score = cur_score;
    run.best.starts = cur;
    return run;
}

}  // namespace

SolveResult solve(const SchedulingProblem& problem, const SolverConfig& config) {
    if (!(config.exact_threshold >= 1.0)) throw Error(ErrorKind::config, "exact_threshold must be >= 1");
    if (config.restarts < 0 || config.max_passes < 1) throw Error(ErrorKind::config, "invalid local search settings");
    if (problem.pinned.size() != problem.shiftable.size())
        throw Error(ErrorKind::shape, "pinned list must match shiftable devices");

    std::vector<std::vector<int>> cands;
    std::string missing;
    for (std::size_t i = 0; i < problem.shiftable.size(); ++i) {
        try {
            cands.push_back(problem.candidate_starts(i));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::infeasible_problem) throw;
            missing += missing.empty() ? "" : "; ";
            missing += e.what();
        }
    }
    if (!missing.empty()) throw Error(ErrorKind::infeasible_problem, missing);

    const Evaluator ev(problem);
    SolveResult result;
    Best best;
    double tuples = 1.0;
    for (const auto& c : cands) tuples *= static_cast<double>(c.size());

    if (cands.empty()) {
        result.method = SolveMethod::trivial;
        best.offer(ev.score({}), {});
        ++result.evaluations;
        if (!best.score.admissible) best.found = false;
    } else if (tuples <= config.exact_threshold) {
        result.method = SolveMethod::exhaustive;
        best = exhaustive(ev, cands, result.evaluations);
    } else {
        result.method = SolveMethod::local_search;
        std::vector<int> init;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const int pref = ev.preferred(i);
            int pick = cands[i].front();
            for (int s : cands[i])
                if (std::abs(s - pref) < std::abs(pick - pref)) pick = s;
            init.push_back(pick);
        }
        auto run = descend(ev, cands, init, config.max_passes, result.evaluations);
        if (run.best.score.admissible) {
            best = run.best;
            result.cost_trace = run.trace;
        }
        for (int r = 0; r < config.restarts; ++r) {
            auto rng = Rng::derived(config.seed, static_cast<std::uint64_t>(r) + 1);
            // Draw a few times so restarts begin inside the bill cap.
            std::optional<std::vector<int>> start;
            for (int attempt = 0; attempt < 16 && !start; ++attempt) {
                std::vector<int> s;
                for (const auto& c : cands)
                    s.push_back(c[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(c.size()) - 1))]);
                ++result.evaluations;
                if (ev.score(s).admissible) start = std::move(s);
            }
            if (!start) continue;
            auto alt = descend(ev, cands, *start, config.max_passes, result.evaluations);
            if (!alt.best.score.admissible) continue;
            if (!best.found || detail::better(alt.best.score, alt.best.starts, best.score, best.starts)) {
                best = alt.best;
                result.cost_trace = alt.trace;
            }
        }
    }

    if (!best.found)
        throw Error(ErrorKind::infeasible_problem, "no schedule keeps the grid bill within " +
                                                       std::to_string(problem.max_grid_bill.value_or(0.0)));
    result.assignment = make_assignment(problem, best.starts);
    result.cost = evaluate_cost(problem, result.assignment);
    return result;
}

}  // namespace drm::scheduler
