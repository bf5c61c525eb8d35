#pragma once

#include <stdexcept>
#include <string>

namespace storm {

// Width of one feature window: request rate, Msg4 count, Msg5 count,
// R1 ratio, resource occupancy.
inline constexpr int kFeatureCount = 5;

// Binary verdict shared by the detector, the guard and the mitigation step.
enum class Decision { Normal, Attack };

inline const char* to_string(Decision d) {
    return d == Decision::Attack ? "Attack" : "Normal";
}

// Caller handed in something that violates an operation's contract
// (dimension mismatch, unordered trace, wrong labels, method mismatch).
struct RejectedInput : std::invalid_argument {
    explicit RejectedInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// Loss or weights went non-finite during gradient descent.
struct TrainingDiverged : std::runtime_error {
    explicit TrainingDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

// Too few rows to fit a model or profile.
struct InsufficientData : std::invalid_argument {
    explicit InsufficientData(const std::string& msg) : std::invalid_argument(msg) {}
};

// No normal-labeled rows available to fit the feature scaler.
struct CalibrationImpossible : std::runtime_error {
    explicit CalibrationImpossible(const std::string& msg) : std::runtime_error(msg) {}
};

// Sampled regression system stayed singular after a retry.
struct DegenerateSampling : std::runtime_error {
    explicit DegenerateSampling(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace storm
