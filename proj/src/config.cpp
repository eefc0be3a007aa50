#include "securebf/config.hpp"

#include <fstream>
#include <set>

namespace securebf {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Point2 to_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("positions must be [x, y] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json from_point(const Point2& p) { return json::array({p.x, p.y}); }

}  // namespace

Scenario scenario_from_json(const json& doc) {
  reject_unknown(doc, {"params", "layout", "sweep"}, "scenario");
  Scenario sc;
  auto& p = sc.params;
  if (doc.contains("params")) {
    const auto& j = doc.at("params");
    reject_unknown(j,
                   {"n_s", "n_1", "n_2", "n_e", "p_s_watts", "p_s_dbm", "sigma2_watts", "gamma", "r_1", "r_2",
                    "gamma_1", "gamma_2", "tau", "beta_max", "sca_tolerance", "sca_max_iters",
                    "osbd_fixed_direction"},
                   "params");
    read(j, "n_s", p.n_s);
    read(j, "n_1", p.n_1);
    read(j, "n_2", p.n_2);
    read(j, "n_e", p.n_e);
    read(j, "p_s_watts", p.p_s_watts);
    if (j.contains("p_s_dbm")) {
      if (j.contains("p_s_watts")) throw ConfigError("give either p_s_watts or p_s_dbm, not both");
      double dbm = 0.0;
      read(j, "p_s_dbm", dbm);
      p.p_s_watts = dbm_to_watts(dbm);
    }
    read(j, "sigma2_watts", p.sigma2_watts);
    read(j, "gamma", p.gamma);
    read(j, "r_1", p.r_1);
    read(j, "r_2", p.r_2);
    read(j, "gamma_1", p.gamma_1);
    read(j, "gamma_2", p.gamma_2);
    read(j, "tau", p.tau);
    read(j, "beta_max", p.beta_max);
    read(j, "sca_tolerance", p.sca_tolerance);
    read(j, "sca_max_iters", p.sca_max_iters);
    read(j, "osbd_fixed_direction", p.osbd_fixed_direction);
  }
  sc.layout = NetworkLayout::default_for(p.n_e);
  if (doc.contains("layout")) {
    const auto& j = doc.at("layout");
    reject_unknown(j,
                   {"field_size_m", "s_position", "d1_position", "d2_position", "eve_positions", "alpha_1", "alpha_2",
                    "alpha_e", "rician_k", "path_loss_ref"},
                   "layout");
    auto& l = sc.layout;
    read(j, "field_size_m", l.field_size_m);
    if (j.contains("s_position")) l.s_position = to_point(j.at("s_position"));
    if (j.contains("d1_position")) l.d1_position = to_point(j.at("d1_position"));
    if (j.contains("d2_position")) l.d2_position = to_point(j.at("d2_position"));
    if (j.contains("eve_positions")) {
      l.eve_positions.clear();
      for (const auto& e : j.at("eve_positions")) l.eve_positions.push_back(to_point(e));
    }
    read(j, "alpha_1", l.alpha_1);
    read(j, "alpha_2", l.alpha_2);
    read(j, "alpha_e", l.alpha_e);
    read(j, "rician_k", l.rician_k);
    read(j, "path_loss_ref", l.path_loss_ref);
  }
  try {
    p.validate();
    sc.layout.validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  const auto& p = sc.params;
  const auto& l = sc.layout;
  json eves = json::array();
  for (const auto& e : l.eve_positions) eves.push_back(from_point(e));
  return {{"params",
           {{"n_s", p.n_s},
            {"n_1", p.n_1},
            {"n_2", p.n_2},
            {"n_e", p.n_e},
            {"p_s_watts", p.p_s_watts},
            {"sigma2_watts", p.sigma2_watts},
            {"gamma", p.gamma},
            {"r_1", p.r_1},
            {"r_2", p.r_2},
            {"gamma_1", p.gamma_1},
            {"gamma_2", p.gamma_2},
            {"tau", p.tau},
            {"beta_max", p.beta_max},
            {"sca_tolerance", p.sca_tolerance},
            {"sca_max_iters", p.sca_max_iters},
            {"osbd_fixed_direction", p.osbd_fixed_direction}}},
          {"layout",
           {{"field_size_m", l.field_size_m},
            {"s_position", from_point(l.s_position)},
            {"d1_position", from_point(l.d1_position)},
            {"d2_position", from_point(l.d2_position)},
            {"eve_positions", eves},
            {"alpha_1", l.alpha_1},
            {"alpha_2", l.alpha_2},
            {"alpha_e", l.alpha_e},
            {"rician_k", l.rician_k},
            {"path_loss_ref", l.path_loss_ref}}}};
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace securebf
