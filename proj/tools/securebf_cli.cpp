// Monte-Carlo sweep driver: securebf --scheme asbd,without-an --sweep p_s_dbm=20,25,30 --realizations 100
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "securebf/sweep.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure NOMA/SWIPT beamforming sweeps"};
  std::string config_path, schemes, sweep, out, trace;
  int realizations = -1, workers = -1;
  std::uint64_t seed = 0;
  bool timing = false, real_channels = false;
  app.add_option("--config", config_path, "JSON scenario file (params, layout, sweep)");
  app.add_option("--scheme", schemes, "comma-separated schemes");
  app.add_option("--sweep", sweep, "swept parameter and values, e.g. p_s_dbm=20,30,40");
  app.add_option("--realizations", realizations, "channel realizations per point");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "CSV output path (JSON twin alongside); stdout when omitted");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--trace", trace, "JSON-lines iteration trace path");
  app.add_flag("--timing", timing, "report mean solve time (makes output run-dependent)");
  app.add_flag("--real-channels", real_channels, "drop imaginary parts of every channel");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  securebf::SweepConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw securebf::ConfigError("cannot open config file: " + config_path);
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        throw securebf::ConfigError("invalid JSON in " + config_path + ": " + e.what());
      }
      cfg = securebf::sweep_config_from_json(doc);
    }
    if (!schemes.empty()) {
      cfg.schemes.clear();
      for (const auto& s : split(schemes, ',')) cfg.schemes.push_back(securebf::parse_scheme(s));
    }
    if (!sweep.empty()) {
      const auto eq = sweep.find('=');
      if (eq == std::string::npos) throw securebf::ConfigError("--sweep expects <param>=<v1,v2,...>");
      cfg.param = securebf::parse_sweep_param(sweep.substr(0, eq));
      cfg.values.clear();
      for (const auto& v : split(sweep.substr(eq + 1), ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
          x = std::stod(v, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != v.size()) throw securebf::ConfigError("bad sweep value '" + v + "'");
        cfg.values.push_back(x);
      }
    }
    if (realizations >= 0) cfg.realizations = realizations;
    if (*seed_opt) cfg.seed = seed;
    if (workers >= 0) cfg.workers = workers;
    if (real_channels) cfg.real_channels = true;
    cfg.timing = timing;
    cfg.trace_path = trace;
    cfg.validate();
  } catch (const securebf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const auto result = securebf::run_sweep(cfg);
    if (out.empty())
      std::cout << securebf::to_csv(result);
    else
      securebf::emit_results(result, out);
    if (const int n = result.numerical_failures(); n > 0) {
      std::cerr << n << " run(s) ended in a solver numerical failure\n";
      return kNumericalFailure;
    }
  } catch (const securebf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
