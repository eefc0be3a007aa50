#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "securebf/channel_model.hpp"
#include "securebf/metrics.hpp"

namespace securebf {

/// Search-space density of the brute-force oracle.
struct GridSpec {
  int resolution = 6;          ///< intervals per scalar dimension (grid has resolution + 1 points)
  int direction_samples = 48;  ///< deterministic low-discrepancy directions per beamformer
  int random_directions = 0;   ///< extra seeded random directions per beamformer
  std::uint64_t seed = 0;
  int workers = 0;  ///< 0 = hardware concurrency

  void validate() const;
};

enum class OracleMode { asbd, osbd };

/// Thrown when a search would exceed the desk-scale budget.
class OracleCostError : public std::runtime_error {
 public:
  OracleCostError(const std::string& what, double estimated_evaluations)
      : std::runtime_error(what), estimated(estimated_evaluations) {}
  double estimated;
};

struct GridResult {
  bool found_feasible = false;
  double best_ssr = 0.0;
  BeamformingSolution best_solution;
  double evaluations = 0.0;
};

/// Unit vectors in C^dim modulo a global phase: a Fibonacci lattice on the
/// Bloch sphere for dim 2, a Kronecker sequence over simplex magnitudes and
/// phases for dim 3, then `random_count` seeded Gaussian directions.
std::vector<CVec> direction_set(int dim, int count, int random_count, std::uint64_t seed);

/// Estimated number of candidate evaluations of grid_search_ssr.
double grid_search_cost(const SystemParams& params, const GridSpec& spec, OracleMode mode);

/// Exhaustive search over beamformer directions, power split, total power,
/// PS ratio and relay power share. Feasibility and SSR come from the metrics
/// module. ASBD mode spends the remaining relay budget on AN inside null(H_12);
/// OSBD mode confines w to null(G_1e) and sends no AN. Requires n_s <= 2 and
/// n_1 <= 3; throws OracleCostError otherwise.
GridResult grid_search_ssr(const ChannelSet& ch, const SystemParams& params, const GridSpec& spec, OracleMode mode);

struct PowerControlOracle {
  bool found_feasible = false;
  double best_objective = 0.0;  ///< nats, the single-antenna objective
  double beta = 0.0;
  double rho1 = 0.0;
  /// Best over beta with rho1 fixed by D1 QoS holding with equality.
  bool equality_feasible = false;
  double equality_objective = 0.0;
  double equality_beta = 0.0;
  /// Best over the 2-D (beta, rho1) grid, no equality assumption.
  bool grid2d_feasible = false;
  double grid2d_objective = 0.0;
  double grid2d_beta = 0.0;
  double grid2d_rho1 = 0.0;
};

/// Scans beta on a `step`-spaced grid with the equality split and a 2-D
/// (beta, rho1) grid at max(step, 1e-3). Feasibility of the QoS, SIC and
/// D2 QoS constraints is judged by the metrics module.
PowerControlOracle brute_force_power_control(const ChannelSet& ch, const SystemParams& params, double step);

}  // namespace securebf
