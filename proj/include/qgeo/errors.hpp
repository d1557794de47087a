#pragma once

#include <stdexcept>
#include <string>

namespace qgeo {

// Error categories map onto the CLI exit-code contract:
// input problems (bad files, bad arguments to library calls) exit 3,
// numerical failures (tolerance violations, singular propagators) exit 4.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InterruptedError : std::runtime_error {
    explicit InterruptedError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qgeo
