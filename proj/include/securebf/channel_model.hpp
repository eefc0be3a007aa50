#pragma once

#include <cstdint>
#include <vector>

#include "securebf/rng.hpp"
#include "securebf/types.hpp"

namespace securebf {

/// Antenna counts, powers, thresholds and iteration controls of one scenario.
/// All powers in watts, all thresholds linear.
struct SystemParams {
  int n_s = 4;  ///< controller antennas
  int n_1 = 4;  ///< strong device (relay) antennas
  int n_2 = 2;  ///< weak device antennas
  int n_e = 3;  ///< colluding single-antenna eavesdroppers
  double p_s_watts = 1.0;
  double sigma2_watts = 1e-7;
  double gamma = 3.0;    ///< SIC / QoS SINR threshold
  double r_1 = 100.0;    ///< rate threshold of D1, value inside the log
  double r_2 = 2.0;      ///< rate threshold of D2, value inside the log
  double gamma_1 = 2.0;  ///< single-antenna target SINR of D1
  double gamma_2 = 3.0;  ///< single-antenna target SINR of D2
  double tau = 0.5;      ///< time fraction of the direct phase
  double beta_max = 1.0; ///< upper bound on the power-splitting ratio
  double sca_tolerance = 1e-4;
  int sca_max_iters = 50;
  /// OSBD: restrict w w^H to the scaled null-space projector instead of a
  /// free PSD matrix inside the eavesdropper null space.
  bool osbd_fixed_direction = false;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

/// Geometry and propagation constants. The LoS component of every Rician link
/// is the all-ones matrix.
struct NetworkLayout {
  double field_size_m = 8.0;
  Point2 s_position{0.0, 4.0};
  Point2 d1_position{2.0, 4.0};
  Point2 d2_position{7.0, 4.0};
  std::vector<Point2> eve_positions;
  double alpha_1 = 2.0;  ///< S->D1 and D1->D2
  double alpha_2 = 4.0;  ///< S->D2
  double alpha_e = 2.0;  ///< S->Eves and D1->Eves
  double rician_k = 4.0;
  double path_loss_ref = 1e-3;  ///< gain at 1 m

  /// Default layout with `n_e` eavesdroppers clustered at x = 1.5 around y = 4.
  static NetworkLayout default_for(int n_e);
  void validate(const SystemParams& params) const;
};

/// One realization of every link. Immutable after construction.
struct ChannelSet {
  CMat h_s1;  ///< N1 x Ns
  CMat h_s2;  ///< N2 x Ns
  CMat h_12;  ///< N2 x N1
  CMat g_se;  ///< Ne x Ns
  CMat g_1e;  ///< Ne x N1
  std::uint64_t seed = 0;

  void validate(const SystemParams& params) const;
};

/// Large-scale gain ref * d^-alpha (ref defaults to 1e-3).
double path_loss(double distance_m, double exponent, double ref = 1e-3);

/// sqrt(K/(1+K)) * 1 1^T + sqrt(1/(1+K)) * CN(0,1) entries.
CMat sample_rician(int rows, int cols, double rician_k, CounterRng& rng);

ChannelSet generate_channel_set(const SystemParams& params, const NetworkLayout& layout, CounterRng& rng);

/// Convenience overload: fresh stream keyed by `seed`.
ChannelSet generate_channel_set(const SystemParams& params, const NetworkLayout& layout, std::uint64_t seed);

/// Real parts of every link (imaginary parts dropped).
ChannelSet restrict_to_real(const ChannelSet& ch);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace securebf
