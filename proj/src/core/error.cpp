#include "drm/error.hpp"

namespace drm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::format: return "format";
        case ErrorKind::config: return "config";
        case ErrorKind::parameter: return "parameter";
        case ErrorKind::feasibility: return "feasibility";
        case ErrorKind::infeasible_problem: return "infeasible-problem";
        case ErrorKind::undefined_metric: return "undefined-metric";
        case ErrorKind::dataset_too_small: return "dataset-too-small";
        case ErrorKind::shape: return "shape";
        case ErrorKind::training_failed: return "training-failed";
        case ErrorKind::degenerate_regression: return "degenerate-regression";
        case ErrorKind::temporal_consistency: return "temporal-consistency";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

void rethrow_with_context(const Error& e, const std::string& context) {
    throw Error(e.kind(), context + ": " + e.what());
}

}  // namespace drm
