#include "securebf/channel_model.hpp"

#include <cmath>
#include <string>

namespace securebf {

void SystemParams::validate() const {
  if (n_s < 1 || n_1 < 1 || n_2 < 1 || n_e < 1) throw DomainError("antenna and eavesdropper counts must be >= 1");
  if (!(p_s_watts >= 0.0) || !std::isfinite(p_s_watts)) throw DomainError("p_s_watts must be finite and >= 0");
  if (!(sigma2_watts > 0.0)) throw DomainError("sigma2_watts must be > 0");
  if (!(gamma >= 0.0) || !(gamma_1 >= 0.0) || !(gamma_2 >= 0.0)) throw DomainError("SINR thresholds must be >= 0");
  if (!(r_1 >= 1.0) || !(r_2 >= 1.0)) throw DomainError("rate thresholds are values inside the log and must be >= 1");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0,1)");
  if (!(beta_max >= 0.0 && beta_max <= 1.0)) throw DomainError("beta_max must lie in [0,1]");
  if (!(sca_tolerance > 0.0) || sca_max_iters < 1) throw DomainError("invalid SCA controls");
}

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

NetworkLayout NetworkLayout::default_for(int n_e) {
  NetworkLayout layout;
  layout.eve_positions.reserve(static_cast<std::size_t>(n_e));
  // Spread across [3.8, 4.2] at x = 1.5.
  for (int j = 0; j < n_e; ++j) {
    const double offset = n_e == 1 ? 0.0 : -0.2 + 0.4 * static_cast<double>(j) / static_cast<double>(n_e - 1);
    layout.eve_positions.push_back({1.5, 4.0 + offset});
  }
  return layout;
}

void NetworkLayout::validate(const SystemParams& params) const {
  auto inside = [this](const Point2& p) {
    return p.x >= 0.0 && p.x <= field_size_m && p.y >= 0.0 && p.y <= field_size_m;
  };
  if (static_cast<int>(eve_positions.size()) != params.n_e)
    throw DomainError("layout has " + std::to_string(eve_positions.size()) + " eavesdropper positions, params expect " +
                      std::to_string(params.n_e));
  if (!inside(s_position) || !inside(d1_position) || !inside(d2_position)) throw DomainError("node outside field");
  for (const auto& e : eve_positions)
    if (!inside(e)) throw DomainError("eavesdropper outside field");
  if (!(alpha_1 > 0.0 && alpha_2 > 0.0 && alpha_e > 0.0)) throw DomainError("path-loss exponents must be > 0");
  if (!(rician_k >= 0.0)) throw DomainError("rician_k must be >= 0");
  if (!(path_loss_ref > 0.0)) throw DomainError("path_loss_ref must be > 0");
}

void ChannelSet::validate(const SystemParams& p) const {
  auto check = [](const CMat& m, int rows, int cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols)
      throw DomainError(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    if (!m.allFinite()) throw DomainError(std::string(name) + " has non-finite entries");
  };
  check(h_s1, p.n_1, p.n_s, "h_s1");
  check(h_s2, p.n_2, p.n_s, "h_s2");
  check(h_12, p.n_2, p.n_1, "h_12");
  check(g_se, p.n_e, p.n_s, "g_se");
  check(g_1e, p.n_e, p.n_1, "g_1e");
}

double path_loss(double distance_m, double exponent, double ref) {
  if (!(distance_m > 0.0)) throw DomainError("path_loss: distance must be > 0");
  if (!(exponent > 0.0)) throw DomainError("path_loss: exponent must be > 0");
  return ref * std::pow(distance_m, -exponent);
}

CMat sample_rician(int rows, int cols, double rician_k, CounterRng& rng) {
  if (rows < 1 || cols < 1) throw DomainError("sample_rician: dimensions must be >= 1");
  if (!(rician_k >= 0.0)) throw DomainError("sample_rician: rician_k must be >= 0");
  const double los = std::sqrt(rician_k / (1.0 + rician_k));
  const double nlos = std::sqrt(1.0 / (1.0 + rician_k));
  CMat h(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) h(r, c) = los + nlos * rng.complex_normal();
  return h;
}

namespace {

CMat sample_rayleigh(int rows, int cols, CounterRng& rng) {
  CMat h(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) h(r, c) = rng.complex_normal();
  return h;
}

}  // namespace

ChannelSet generate_channel_set(const SystemParams& params, const NetworkLayout& layout, CounterRng& rng) {
  params.validate();
  layout.validate(params);
  ChannelSet ch;
  ch.seed = rng.key();
  const double ref = layout.path_loss_ref;

  ch.h_s1 = sample_rician(params.n_1, params.n_s, layout.rician_k, rng) *
            std::sqrt(path_loss(distance(layout.s_position, layout.d1_position), layout.alpha_1, ref));
  ch.h_s2 = sample_rayleigh(params.n_2, params.n_s, rng) *
            std::sqrt(path_loss(distance(layout.s_position, layout.d2_position), layout.alpha_2, ref));
  ch.h_12 = sample_rician(params.n_2, params.n_1, layout.rician_k, rng) *
            std::sqrt(path_loss(distance(layout.d1_position, layout.d2_position), layout.alpha_1, ref));
  ch.g_se = sample_rician(params.n_e, params.n_s, layout.rician_k, rng);
  ch.g_1e = sample_rician(params.n_e, params.n_1, layout.rician_k, rng);
  for (int j = 0; j < params.n_e; ++j) {
    const auto& eve = layout.eve_positions[static_cast<std::size_t>(j)];
    ch.g_se.row(j) *= std::sqrt(path_loss(distance(layout.s_position, eve), layout.alpha_e, ref));
    ch.g_1e.row(j) *= std::sqrt(path_loss(distance(layout.d1_position, eve), layout.alpha_e, ref));
  }
  return ch;
}

ChannelSet generate_channel_set(const SystemParams& params, const NetworkLayout& layout, std::uint64_t seed) {
  CounterRng rng(seed);
  return generate_channel_set(params, layout, rng);
}

ChannelSet restrict_to_real(const ChannelSet& ch) {
  auto re = [](const CMat& m) -> CMat { return m.real().cast<cplx>(); };
  ChannelSet out;
  out.h_s1 = re(ch.h_s1);
  out.h_s2 = re(ch.h_s2);
  out.h_12 = re(ch.h_12);
  out.g_se = re(ch.g_se);
  out.g_1e = re(ch.g_1e);
  out.seed = ch.seed;
  return out;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

}  // namespace securebf
