#pragma once

#include <stdexcept>
#include <string>

namespace weylscale {

// Precondition violations (bad arguments, unusable configuration).
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Runtime numerical guards: headroom violations, divergent norms used where a
// finite one is required, ill-conditioned Gram matrices.  Carries a short
// guard name so the CLI can report which guard tripped.
struct numerical_guard : std::runtime_error {
    std::string guard;
    numerical_guard(std::string name, const std::string& what)
        : std::runtime_error(what), guard(std::move(name)) {}
};

}  // namespace weylscale
