#pragma once

#include <stdexcept>
#include <string>

namespace qgeo {

// Exit-code mapping used by the CLI: validation errors -> 2, numerical
// failures -> 3.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexOutOfRange : std::runtime_error {
    explicit IndexOutOfRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct MissingGenerators : std::runtime_error {
    explicit MissingGenerators(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct IncompatibleSupport : std::runtime_error {
    explicit IncompatibleSupport(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalInconsistency : std::runtime_error {
    explicit NumericalInconsistency(const std::string& msg) : std::runtime_error(msg) {}
};

struct FitFailed : std::runtime_error {
    explicit FitFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct StepTooLarge : std::runtime_error {
    explicit StepTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateGaps : std::runtime_error {
    explicit DegenerateGaps(const std::string& msg) : std::runtime_error(msg) {}
};

struct InconsistentReconstruction : std::runtime_error {
    explicit InconsistentReconstruction(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qgeo
