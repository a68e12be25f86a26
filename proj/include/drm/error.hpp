#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drm {

enum class ErrorKind {
    format,               // malformed input file or mismatched lengths
    config,               // invalid configuration or recipe
    parameter,            // out-of-range argument
    feasibility,          // a placement or assignment violates a constraint
    infeasible_problem,   // some appliance has no feasible start at all
    undefined_metric,     // metric has no meaningful value for the input
    dataset_too_small,
    shape,                // wrong vector/window length
    training_failed,
    degenerate_regression,
    temporal_consistency, // online data arrived out of order
    io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Rethrows `e` with `context` prepended to the message, keeping the kind.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace drm
