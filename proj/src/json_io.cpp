#include "sumprod/json_io.hpp"

namespace sumprod {

using nlohmann::json;

json to_json(const InequalityReport& r) {
  return json{{"id", r.id},
              {"lhs", r.lhs.str()},
              {"rhs", r.rhs.str()},
              {"ratio", r.ratio.str()},
              {"explicit", r.explicit_constant},
              {"pass", r.pass ? json(*r.pass) : json()},
              {"inputs", r.inputs}};
}

json to_json(const SuiteResult& r) {
  json reports = json::array();
  for (const auto& x : r.reports) reports.push_back(to_json(x));
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"id", e.id}, {"kind", e.kind}, {"message", e.message}});
  return json{{"reports", reports}, {"errors", errors}, {"all_explicit_pass", r.all_explicit_pass()}};
}

json to_json(const ExtremalRecord& r) {
  json set = json::array();
  for (const auto& x : r.set) set.push_back(x.str());
  json generator;
  try {
    generator = json::parse(r.generator);
  } catch (const json::exception&) {
    generator = r.generator;
  }
  return json{{"set", set},
              {"inequality_id", r.inequality_id},
              {"ratio", r.ratio.str()},
              {"generator", generator},
              {"timestamp", r.timestamp},
              {"artifact_version", r.artifact_version},
              {"drift", r.drift}};
}

}  // namespace sumprod
