#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "minkdim/core.hpp"

namespace minkdim {

/// coefficient * x^x_power * y^y_power
struct Monomial {
  double coefficient = 0.0;
  int x_power = 0;
  int y_power = 0;
};

/// Hyperbolic saddle in normal form: x' = -x, y' = alpha*y + h(x, y).
/// h must be O(x y^2): every term needs x_power >= 1 and y_power >= 2.
struct SaddleSpec {
  double alpha = 1.0;
  std::vector<Monomial> perturbation;
};

/// Semi-hyperbolic point in normal form: x' = -x, y' = alpha*y^m + h(x, y),
/// with every term of h of y-order at least 2m - 1.
struct SemiHypSpec {
  double alpha = 1.0;
  int m = 2;
  std::vector<Monomial> perturbation;
};

using CornerSpec = std::variant<SaddleSpec, SemiHypSpec>;

void validate(const SaddleSpec& spec);
void validate(const SemiHypSpec& spec);
void validate(const CornerSpec& spec);

/// r' = -r^(2k+1), phi' = 1.
struct FocusSpec {
  int k = 1;
  double r0 = 0.5;
  std::size_t turns = 100;
};

enum class CycleSide { inside, outside };

/// Spiral approaching the cycle r = a with |r - a|' = -|r - a|^m, phi' = 1.
struct LimitCycleSpec {
  double a = 0.5;
  int m = 1;
  CycleSide side = CycleSide::outside;
  double r0 = 0.8;
  std::size_t turns = 100;
};

struct SpiralSampling {
  double chord_tolerance = 1e-5;
  /// Smallest delta the curve will be measured at; fixes how far in the
  /// spiral must run.
  double delta_min = 1e-3;
};

/// Closed-form x on the saddle trajectory through (1, y0): (y0/y)^(1/alpha).
double saddle_x(double alpha, double y0, double y);

/// Natural log of the closed-form x on the semi-hyperbolic trajectory through
/// (1, y0): (y^(1-m) - y0^(1-m)) / (alpha (m-1)).
double semihyp_log_x(double alpha, int m, double y0, double y);

/// Polyline of the unperturbed saddle trajectory from (1, y0) to
/// (y0^(1/alpha), 1), adaptively sampled in y to the given chord error.
TrajectorySegment saddle_trajectory(const SaddleSpec& spec, double y0, double chord_tolerance);

/// Polyline of the unperturbed semi-hyperbolic trajectory. x values below the
/// smallest positive normal double are clamped and the segment is flagged.
TrajectorySegment semihyp_trajectory(const SemiHypSpec& spec, double y0, double chord_tolerance);

struct IntegrationOptions {
  double chord_tolerance = 1e-5;
  /// Local error bound per unit of parameter length.
  double local_tolerance = 1e-10;
  double crossing_tolerance = 1e-12;
  std::size_t max_steps = 5'000'000;
};

/// Dormand-Prince 5(4) integration from start until the trajectory crosses
/// {y = 1}; the crossing is located by bisection on the final step.
///
/// A start already on {y = 1} yields a one-point segment flagged degenerate.
TrajectorySegment integrate_trajectory(const CornerSpec& field, Point start,
                                       const IntegrationOptions& options = {});

/// One segment per entry point, closed form when the field is unperturbed and
/// integrated otherwise. The exit sequence stops at the first clamped segment
/// and is tail-cleaned.
TrajectoryBundle build_bundle(const CornerSpec& field, const MonotoneSequence& entry,
                              double chord_tolerance);

void validate(const FocusSpec& spec);
void validate(const LimitCycleSpec& spec);

double focus_radius(const FocusSpec& spec, double phi);

/// Closed-form spiral r(phi) = (r0^(-2k) + 2k phi)^(-1/(2k)) over `turns`
/// turns, at least 64 points per turn. The final radius must fall below
/// sampling.delta_min.
TrajectorySegment focus_spiral(const FocusSpec& spec, const SpiralSampling& sampling);

/// Radii where the focus spiral crosses the positive x-axis.
MonotoneSequence focus_transversal_orbit(const FocusSpec& spec, std::size_t count);

/// Distance |r - a| after phi radians.
double limit_cycle_offset(const LimitCycleSpec& spec, double phi);

/// Spiral toward r = a, stopped once |r - a| < sampling.delta_min / 10.
TrajectorySegment limit_cycle_spiral(const LimitCycleSpec& spec, const SpiralSampling& sampling);

/// Offsets |r - a| at successive crossings of the positive x-axis.
MonotoneSequence limit_cycle_transversal_orbit(const LimitCycleSpec& spec, std::size_t count);

}  // namespace minkdim
