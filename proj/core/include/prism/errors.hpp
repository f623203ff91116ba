#pragma once

#include <stdexcept>
#include <string>

#include "prism/zmod.hpp"

namespace prism {

struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation produced something that the mathematics forbids. Never silenced.
struct InternalConsistency : std::logic_error {
    using std::logic_error::logic_error;
};

struct OrientationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CapabilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PresentationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace prism
