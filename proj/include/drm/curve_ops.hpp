#pragma once

#include "drm/core.hpp"

#include <span>

namespace drm {

/// Adds one appliance run starting at `start` into `acc`.
/// Throws ErrorKind::feasibility if the run leaves the grid.
void accumulate_run(SlotValues& acc, const ApplianceInstance& appliance, int start);

/// Per-slot sum of every instance's contribution. `starts[i]` belongs to
/// `instances[i]`; contributions are added in instance order.
LoadCurve total_curve(std::span<const ApplianceInstance> instances, std::span<const int> starts);

/// Consumption split by device class and by supply source.
struct CurveBreakdown {
    LoadCurve all;          // every device, every source
    LoadCurve shiftable;    // shiftable devices only
    LoadCurve grid;         // grid-supplied portion
    LoadCurve pv_supplied;  // shiftable demand met by PV/battery
};

/// PV/battery supplies the whole shiftable demand of a slot when its flag is
/// set; fixed loads always draw from the grid.
CurveBreakdown split_by_source(std::span<const ApplianceInstance> instances,
                               std::span<const int> starts, const SlotFlags& pv_flags);

/// mean / peak. Throws ErrorKind::undefined_metric for an all-zero curve.
double load_factor(const LoadCurve& curve);

/// Energy cost of a grid-supplied curve: sum of kW x 0.5 h x price.
double bill(const LoadCurve& grid_curve, const PricingSignal& pricing);
/// Same, on raw series; throws ErrorKind::format unless both have 48 entries.
double bill(std::span<const double> grid_kw, std::span<const double> price_per_kwh);

}  // namespace drm
