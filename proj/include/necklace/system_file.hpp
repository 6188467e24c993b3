#pragma once

#include <string>

#include "necklace/system.hpp"

namespace necklace {

// JSON system description:
// {
//   "dimension": 2,
//   "name": "...",                     (optional)
//   "description": "...",              (optional)
//   "maps": [
//     {"matrix": [[a,b],[c,d]], "translation": [tx,ty]},
//     ...
//   ]
// }
// Errors name the offending map index and field.
NecklaceSystem parse_system_file(const std::string& text);

NecklaceSystem load_system_file(const std::string& path);

std::string serialize_system(const NecklaceSystem& sys);

}  // namespace necklace
