#pragma once

#include <stdexcept>
#include <string>

namespace qsemis {

// Invalid user input: bad flags, malformed files, out-of-range parameters.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Problem instance is too large for the dense statevector / exhaustive
// machinery.  The CLI maps this to exit code 3.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: eigensolver non-convergence, empty retained subspace,
// non-finite objective.  The CLI maps this to exit code 4.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsemis
