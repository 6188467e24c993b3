#pragma once

#include <stdexcept>
#include <string>

namespace necklace {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear part is not invertible; the map is not a homeomorphism.
struct SingularMatrixError : Error {
    using Error::Error;
};

// Operator norm of the linear part is >= 1.
struct NotContractiveError : Error {
    using Error::Error;
};

// The map family cannot form a valid system (n < 3, bad adjacency, ...).
struct InvalidSystemError : Error {
    using Error::Error;
};

// A point/word/depth budget would be exceeded.
struct BudgetError : Error {
    using Error::Error;
};

// Malformed user input (files, CLI arguments, out-of-range parameters).
struct InputError : Error {
    using Error::Error;
};

// Node descent could not isolate a single contact point.
struct AmbiguityError : Error {
    using Error::Error;
};

}  // namespace necklace
