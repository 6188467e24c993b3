#pragma once

#include <string>

namespace necklace {

// Outcome of a certified check. Unknown means "not decidable at the given
// depth/tolerance/budget", never an error.
enum class Status { Verified, Refuted, Unknown };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Verified: return "Verified";
        case Status::Refuted: return "Refuted";
        default: return "Unknown";
    }
}

inline int exit_code(Status s) {
    switch (s) {
        case Status::Verified: return 0;
        case Status::Refuted: return 2;
        default: return 3;
    }
}

}  // namespace necklace
