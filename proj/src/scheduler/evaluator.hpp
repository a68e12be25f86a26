#pragma once

#include "drm/scheduler.hpp"

#include <span>
#include <vector>

namespace drm::scheduler::detail {

void arbitrate(const PvSystem& pv, const SlotValues& demand, const std::array<double, kSlotsPerDay>& until_peak,
               int max_app_duration, std::span<const bool> frozen_flags, PvArbitration& out);

/// Cost evaluation shared by evaluate_cost, the exhaustive search and local
/// search. Every path adds fixed devices first and shiftable devices in
/// problem order, so identical starts give bit-identical costs.
class Evaluator {
public:
    struct Score {
        double total = 0.0;
        double deviation = 0.0;
        double discomfort = 0.0;
        int abs_shift = 0;
        bool admissible = true;  // within the bill cap
    };

    explicit Evaluator(const SchedulingProblem& problem);

    const SlotValues& fixed_base() const { return fixed_base_; }
    void add_run(SlotValues& all, SlotValues& shift, std::size_t i, int start) const;
    double discomfort_term(std::size_t i, int start) const;
    int preferred(std::size_t i) const { return preferred_[i]; }

    /// Finishes a score from accumulated curves; computes PV flags when
    /// `given_flags` is null, storing them in `pv_out` if provided.
    Score finish(const SlotValues& all, const SlotValues& shift, double discomfort, int abs_shift,
                 const SlotFlags* given_flags, PvArbitration* pv_out) const;

    Score score(std::span<const int> starts, PvArbitration* pv_out = nullptr) const;
    Score score_with_flags(std::span<const int> starts, const SlotFlags& flags) const;

private:
    const SchedulingProblem& problem_;
    SlotValues fixed_base_{};
    std::array<double, kSlotsPerDay> until_peak_{};
    std::vector<ApplianceWeights> weights_;
    std::vector<int> preferred_;
    int max_pending_ = 0;
    SlotFlags frozen_{};
    std::size_t frozen_count_ = 0;
};

/// Strict ordering: lower total, then less total shift, then lexicographic starts.
bool better(const Evaluator::Score& a, std::span<const int> a_starts, const Evaluator::Score& b,
            std::span<const int> b_starts);

}  // namespace drm::scheduler::detail
