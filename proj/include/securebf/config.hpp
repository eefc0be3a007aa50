#pragma once

#include <string>

#include <json.hpp>

#include "securebf/channel_model.hpp"

namespace securebf {

struct Scenario {
  SystemParams params;
  NetworkLayout layout = NetworkLayout::default_for(3);
};

/// Parses the "params" and "layout" objects of a scenario document (see
/// docs/config.md). Missing keys keep their defaults; unknown keys are
/// rejected with ConfigError. When "n_e" changes and no eve positions are
/// given, the default cluster is regenerated for the new count.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario_file(const std::string& path);

}  // namespace securebf
