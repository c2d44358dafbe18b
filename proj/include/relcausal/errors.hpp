#pragma once

#include <stdexcept>
#include <string>

namespace relcausal {

// Invalid arguments, malformed statements, unknown names.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Variable count beyond the exhaustive-enumeration cap.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// File or stream failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Data unusable for the requested statistic (singular covariance,
// single-class condition column, too few rows).
class DegenerateDataError : public std::runtime_error {
public:
    explicit DegenerateDataError(const std::string& what) : std::runtime_error(what) {}
};

// No causal structure explains the supplied independence statements.
class FaithfulnessError : public std::runtime_error {
public:
    explicit FaithfulnessError(const std::string& what, std::string conflicts = "")
        : std::runtime_error(what), conflicting_statements(std::move(conflicts)) {}

    // Rendered list of the statements whose removal would restore consistency.
    std::string conflicting_statements;
};

}  // namespace relcausal
