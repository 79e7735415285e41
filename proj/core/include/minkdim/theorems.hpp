#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minkdim/retmaps.hpp"

namespace minkdim {

/// 1 + dimension of the entry sequence, for a bundle through a saddle or
/// semi-hyperbolic corner.
double predict_corner_dim(double seq_dim);

/// 1 + the largest entry-sequence dimension over the corners of a polycycle.
double predict_polycycle_dim(std::span<const double> seq_dims);

/// Spiral dimension near a saddle loop of codimension codim:
/// 2 - 2/k for even k, 2 - 2/(k+1) for odd k.
double saddle_loop_dim(int codim);

/// Pre-floor values within this distance of an integer snap to it.
inline constexpr double kFloorGuard = 1e-9;

struct GuardedFloor {
  long value = 0;
  bool guarded = false;  ///< the snap changed the result or was needed
};

GuardedFloor guarded_floor(double v);

struct EpsilonResult {
  int value = 0;
  /// 1 when k1-1 < r1(k2-1) selected the formula, 2 otherwise.
  int branch = 1;
  bool guard_triggered = false;
};

/// Mourtada's cyclicity for a 2-cycle with r1 * r2 = 1 (r2 = 1/r1).
/// nullopt encodes k = infinity.
EpsilonResult mourtada_epsilon(double r1, std::optional<int> k1, std::optional<int> k2);

struct BoundResult {
  int value = 0;
  bool guard_triggered = false;
};

/// floor(3 + (1+r)(d-1)/(2-d)) for 1 <= d < 2 - 1e-6 and 0 < r <= 1.
BoundResult cyclicity_bound(double d, double r);

struct RecoveredRatio {
  double r = 1.0;
  bool warning = false;  ///< d1 == d2
};

/// min{(d1-1)/(d2-1), (d2-1)/(d1-1)} for orbit dimensions in (0,1).
RecoveredRatio recover_r(double d1, double d2);

/// min{(g1-1)/(g2-1), (g2-1)/(g1-1)} from the tangency orders of the two
/// return maps. Equals min(r1, r2) for the model 2-cycles.
double ratio_from_orders(double order1, double order2);

enum class ProofCase { hyperbolic, r1_above_one, r1_below_one };

const char* to_string(ProofCase c);

struct ConsistencyReport {
  Classification side1;
  Classification side2;
  double d1 = 0.0;
  double d2 = 0.0;
  /// Spiral dimension 1 + max(d1, d2).
  double d = 1.0;
  ProofCase proof_case = ProofCase::hyperbolic;
  /// recover_r applied to (d1, d2).
  std::optional<double> r_from_dims;
  /// ratio_from_orders applied to the tangency orders; used for the bound.
  std::optional<double> r_from_orders;
  int bound = 3;
  std::optional<int> bound_from_dims_r;
  std::optional<int> epsilon;
  bool consistent = true;
  std::vector<std::string> warnings;
};

/// Classifies both return maps, derives d and r, and compares the cyclicity
/// bound against Mourtada's epsilon.
ConsistencyReport consistency_report(const TwoCycleSpec& spec);

}  // namespace minkdim
