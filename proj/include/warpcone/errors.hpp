#pragma once

#include <stdexcept>
#include <string>

namespace warpcone {

// Precondition violations on user-supplied data (bad descriptors, invalid
// triangles, out-of-range coordinates).  CLI maps these to exit code 2.
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside a solver (bracketing failed, no convergence).
// CLI maps these to exit code 3.
class solver_failure : public std::runtime_error {
public:
    explicit solver_failure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace warpcone
