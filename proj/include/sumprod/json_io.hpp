#pragma once

#include "json.hpp"
#include "sumprod/explore.hpp"
#include "sumprod/verify.hpp"

namespace sumprod {

/// {"explicit", "id", "inputs", "lhs", "pass", "ratio", "rhs"}; values in exact str() form.
nlohmann::json to_json(const InequalityReport& r);
nlohmann::json to_json(const SuiteResult& r);
nlohmann::json to_json(const ExtremalRecord& r);

}  // namespace sumprod
