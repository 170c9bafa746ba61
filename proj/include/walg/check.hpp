#pragma once

#include <string>

#include <json.hpp>

namespace walg {

/// Outcome of one verification with an optional witness and supporting data.
struct CheckRecord {
    std::string name;
    bool pass = true;
    std::string witness;
    nlohmann::json data = nlohmann::json::object();
};

} // namespace walg
