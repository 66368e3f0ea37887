#pragma once

#include <json.hpp>

#include "slrel/core/opinion.hpp"

namespace slrel {

using Json = nlohmann::ordered_json;

inline Json to_json(const Opinion& op) {
  Json j;
  j["beliefs"] = op.beliefs();
  j["uncertainty"] = op.uncertainty();
  j["base_rates"] = op.base_rates();
  j["prior_weight"] = op.prior_weight();
  return j;
}

inline Opinion opinion_from_json(const Json& j) {
  try {
    return Opinion(j.at("beliefs").get<std::vector<double>>(), j.at("uncertainty").get<double>(),
                   j.at("base_rates").get<std::vector<double>>(),
                   j.value("prior_weight", kDefaultPriorWeight));
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed opinion record: ") + e.what());
  }
}

}  // namespace slrel
