#include "securebf/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "securebf/baselines.hpp"
#include "securebf/power_control.hpp"

namespace securebf {

namespace {

struct SchemeName {
  Scheme scheme;
  const char* name;
};
constexpr SchemeName kSchemes[] = {
    {Scheme::asbd, "asbd"},           {Scheme::without_an, "without-an"}, {Scheme::oma_w_an, "oma-w-an"},
    {Scheme::osbd, "osbd"},           {Scheme::noma_wo_eh, "noma-wo-eh"}, {Scheme::oma_wo_eh, "oma-wo-eh"},
    {Scheme::oma_w_eh, "oma-w-eh"},   {Scheme::power_control, "power-control"},
};

struct ParamName {
  SweepParam param;
  const char* name;
};
constexpr ParamName kParams[] = {{SweepParam::p_s_dbm, "p_s_dbm"},
                                 {SweepParam::n_1, "n_1"},
                                 {SweepParam::n_s, "n_s"},
                                 {SweepParam::r_1, "r_1"},
                                 {SweepParam::gamma, "gamma"}};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 64.0)
    throw ConfigError(std::string(what) + " sweep values must be integers in [1, 64]");
  return static_cast<int>(v);
}

template <class R>
RunRecord finish(const R& out, double ssr) {
  RunRecord rec;
  rec.feasible = out.feasible;
  rec.ssr = out.feasible ? ssr : 0.0;
  rec.iterations = out.iterations;
  rec.solve_ms = out.solve_ms;
  rec.status = out.status;
  rec.numerical_failure = !out.feasible && out.status == conic::Status::numerical_failure;
  rec.solution = out.solution;
  return rec;
}

}  // namespace

std::string to_string(Scheme s) {
  for (const auto& e : kSchemes)
    if (e.scheme == s) return e.name;
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  for (const auto& e : kSchemes)
    if (name == e.name) return e.scheme;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string to_string(SweepParam s) {
  for (const auto& e : kParams)
    if (e.param == s) return e.name;
  return "unknown";
}

SweepParam parse_sweep_param(const std::string& name) {
  for (const auto& e : kParams)
    if (name == e.name) return e.param;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

SystemParams apply_sweep_value(const SystemParams& base, SweepParam param, double value) {
  SystemParams p = base;
  switch (param) {
    case SweepParam::p_s_dbm:
      p.p_s_watts = dbm_to_watts(value);
      break;
    case SweepParam::n_1:
      p.n_1 = as_count(value, "n_1");
      break;
    case SweepParam::n_s:
      p.n_s = as_count(value, "n_s");
      break;
    case SweepParam::r_1:
      p.r_1 = value;
      break;
    case SweepParam::gamma:
      p.gamma = value;
      break;
  }
  return p;
}

RunRecord run_scheme(Scheme scheme, const ChannelSet& ch, const SystemParams& p, const TraceSink& trace) {
  auto nom = [&](const auto& out) { return finish(out, secrecy_sum_rate(ch, out.solution, p).ssr); };
  switch (scheme) {
    case Scheme::asbd:
      return nom(run_asbd(ch, p, trace));
    case Scheme::without_an:
      return nom(baseline_without_an(ch, p, trace));
    case Scheme::osbd:
      return nom(run_osbd(ch, p, trace));
    case Scheme::noma_wo_eh:
      return nom(baseline_noma_no_eh(ch, p, trace));
    case Scheme::power_control:
      return nom(run_power_control(ch, p, trace));
    case Scheme::oma_w_an:
    case Scheme::oma_wo_eh:
    case Scheme::oma_w_eh: {
      const bool an = scheme == Scheme::oma_w_an, eh = scheme != Scheme::oma_wo_eh;
      const OmaResult out = baseline_oma(ch, p, an, eh);
      return finish(out, oma_secrecy_sum_rate(ch, out.solution, p, eh).ssr);
    }
  }
  throw DomainError("unhandled scheme");
}

void SweepConfig::validate() const {
  if (schemes.empty()) throw ConfigError("no schemes selected");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (!std::is_sorted(values.begin(), values.end())) throw ConfigError("sweep values must be sorted");
  for (double v : values) {
    const SystemParams p = apply_sweep_value(scenario.params, param, v);
    try {
      p.validate();
      scenario.layout.validate(p);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("at ") + to_string(param) + "=" + fmt(v) + ": " + e.what());
    }
    for (Scheme s : schemes) {
      if (s == Scheme::osbd && p.n_1 <= p.n_e)
        throw ConfigError("osbd needs n_1 > n_e (got n_1=" + std::to_string(p.n_1) + ")");
      if (s == Scheme::power_control && (p.n_s != 1 || p.n_1 != 1 || p.n_2 != 1))
        throw ConfigError("power-control needs n_s = n_1 = n_2 = 1");
    }
  }
}

SweepConfig sweep_config_from_json(const nlohmann::json& doc) {
  SweepConfig cfg;
  cfg.scenario = scenario_from_json(doc);
  if (!doc.contains("sweep")) return cfg;
  const auto& j = doc.at("sweep");
  if (!j.is_object()) throw ConfigError("sweep must be a JSON object");
  static const char* allowed[] = {"schemes", "param", "values", "realizations", "seed", "workers", "real_channels"};
  for (const auto& [key, _] : j.items())
    if (std::find_if(std::begin(allowed), std::end(allowed), [&](const char* a) { return key == a; }) ==
        std::end(allowed))
      throw ConfigError("unknown key '" + key + "' in sweep");
  try {
    if (j.contains("schemes")) {
      cfg.schemes.clear();
      for (const auto& s : j.at("schemes")) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    if (j.contains("param")) cfg.param = parse_sweep_param(j.at("param").get<std::string>());
    if (j.contains("values")) cfg.values = j.at("values").get<std::vector<double>>();
    if (j.contains("realizations")) cfg.realizations = j.at("realizations").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("real_channels")) cfg.real_channels = j.at("real_channels").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad sweep entry: ") + e.what());
  }
  return cfg;
}

int SweepResult::numerical_failures() const {
  int n = 0;
  for (const auto& r : rows) n += r.numerical_failures;
  return n;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t ns = cfg.schemes.size(), nv = cfg.values.size();
  const std::size_t nr = static_cast<std::size_t>(cfg.realizations);
  const bool tracing = !cfg.trace_path.empty();

  // records[(v * nr + r) * ns + s]
  std::vector<RunRecord> records(nv * nr * ns);
  std::vector<std::vector<nlohmann::json>> traces(tracing ? records.size() : 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t task; (task = next.fetch_add(1)) < nv * nr;) {
      const std::size_t v = task / nr, r = task % nr;
      const SystemParams p = apply_sweep_value(cfg.scenario.params, cfg.param, cfg.values[v]);
      ChannelSet ch = generate_channel_set(p, cfg.scenario.layout, CounterRng::derive_key(cfg.seed, r));
      if (cfg.real_channels) ch = restrict_to_real(ch);
      for (std::size_t s = 0; s < ns; ++s) {
        const std::size_t idx = task * ns + s;
        TraceSink sink;
        if (tracing) sink = [&traces, idx](const nlohmann::json& j) { traces[idx].push_back(j); };
        records[idx] = run_scheme(cfg.schemes[s], ch, p, sink);
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(nv * nr)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t v = 0; v < nv; ++v) {
      SweepRow row;
      row.scheme = cfg.schemes[s];
      row.param = cfg.param;
      row.value = cfg.values[v];
      double sum = 0.0, sum_sq = 0.0, iters = 0.0, ms = 0.0;
      int feasible = 0;
      for (std::size_t r = 0; r < nr; ++r) {
        const RunRecord& rec = records[(v * nr + r) * ns + s];
        iters += rec.iterations;
        ms += rec.solve_ms;
        if (rec.numerical_failure) ++row.numerical_failures;
        if (rec.feasible) {
          ++feasible;
          sum += rec.ssr;
          sum_sq += rec.ssr * rec.ssr;
          row.samples.emplace_back(rec.ssr);
        } else {
          row.samples.emplace_back(std::nullopt);
        }
      }
      row.feasible_frac = static_cast<double>(feasible) / nr;
      row.mean_iters = iters / nr;
      row.mean_ms = cfg.timing ? ms / nr : 0.0;
      if (feasible > 0) row.mean_ssr = sum / feasible;
      if (feasible > 1) {
        const double var = std::max(0.0, (sum_sq - feasible * row.mean_ssr * row.mean_ssr) / (feasible - 1));
        row.stderr_ssr = std::sqrt(var / feasible);
      }
      out.rows.push_back(std::move(row));
    }
  }

  if (tracing) {
    std::ofstream f(cfg.trace_path);
    if (!f) throw std::runtime_error("cannot write trace file: " + cfg.trace_path);
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t s = 0; s < ns; ++s)
          for (nlohmann::json j : traces[(v * nr + r) * ns + s]) {
            j["scheme"] = to_string(cfg.schemes[s]);
            j[to_string(cfg.param)] = cfg.values[v];
            j["realization"] = r;
            f << j.dump() << '\n';
          }
  }
  return out;
}

std::string sweep_csv_header() { return "scheme,param,value,mean_ssr,stderr,feasible_frac,mean_iters,mean_ms"; }

std::string to_csv(const SweepResult& res) {
  std::ostringstream os;
  os << sweep_csv_header() << '\n';
  for (const auto& r : res.rows)
    os << to_string(r.scheme) << ',' << to_string(r.param) << ',' << fmt(r.value) << ',' << fmt(r.mean_ssr) << ','
       << fmt(r.stderr_ssr) << ',' << fmt(r.feasible_frac) << ',' << fmt(r.mean_iters) << ',' << fmt(r.mean_ms)
       << '\n';
  return os.str();
}

nlohmann::json to_json(const SweepResult& res) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : res.rows)
    rows.push_back({{"scheme", to_string(r.scheme)},
                    {"param", to_string(r.param)},
                    {"value", r.value},
                    {"mean_ssr", r.mean_ssr},
                    {"stderr", r.stderr_ssr},
                    {"feasible_frac", r.feasible_frac},
                    {"mean_iters", r.mean_iters},
                    {"mean_ms", r.mean_ms},
                    {"numerical_failures", r.numerical_failures}});
  return {{"rows", rows}};
}

SweepResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != sweep_csv_header()) throw ConfigError("CSV header mismatch");
  SweepResult res;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw ConfigError("CSV row needs 8 fields: " + line);
    SweepRow r;
    r.scheme = parse_scheme(f[0]);
    r.param = parse_sweep_param(f[1]);
    r.value = std::stod(f[2]);
    r.mean_ssr = std::stod(f[3]);
    r.stderr_ssr = std::stod(f[4]);
    r.feasible_frac = std::stod(f[5]);
    r.mean_iters = std::stod(f[6]);
    r.mean_ms = std::stod(f[7]);
    res.rows.push_back(std::move(r));
  }
  return res;
}

void emit_results(const SweepResult& res, const std::string& path) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + path);
  csv << to_csv(res);
  if (!csv) throw std::runtime_error("write failed: " + path);
  std::string json_path = path;
  if (json_path.size() > 4 && json_path.substr(json_path.size() - 4) == ".csv") json_path.resize(json_path.size() - 4);
  json_path += ".json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << to_json(res).dump(2) << '\n';
}

}  // namespace securebf
