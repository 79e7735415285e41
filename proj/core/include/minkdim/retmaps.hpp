#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "minkdim/core.hpp"

namespace minkdim {

/// A * x^r
struct PowerMap {
  double A = 1.0;
  double r = 1.0;
};

/// lambda * x
struct LinearMap {
  double lambda = 1.0;
};

/// x + C * x^k
struct TangentMap {
  int k = 2;
  double C = -1.0;
};

/// x + C * x^k * (-ln x)
struct TangentLogMap {
  int k = 2;
  double C = -1.0;
};

struct MapSpec;

/// Applied left to right: parts[0] first.
struct CompositeMap {
  std::vector<MapSpec> parts;
};

struct MapSpec {
  std::variant<PowerMap, LinearMap, TangentMap, TangentLogMap, CompositeMap> form;
};

MapSpec power(double A, double r);
MapSpec linear(double lambda);
MapSpec tangent(int k, double C);
MapSpec tangent_log(int k, double C);
MapSpec composite(std::vector<MapSpec> parts);

void validate(const MapSpec& spec);

/// Validated map with its domain (0, x_max] fixed at construction.
///
/// x_max is infinite for bare power and linear maps. Otherwise it is the
/// largest point of the grid {0.001, 0.002, ..., 0.5} up to which the map is
/// increasing and every intermediate value stays in (0, 1).
class Map {
 public:
  explicit Map(MapSpec spec);

  /// Throws out_of_domain outside (0, x_max] or if a composite leaves (0, 1).
  double operator()(double x) const;
  double x_max() const { return x_max_; }
  const MapSpec& spec() const { return spec_; }

 private:
  MapSpec spec_;
  double x_max_;
};

double eval_map(const MapSpec& spec, double x);

/// c * x^exponent * (-ln x)^log_power
struct JetTerm {
  double coefficient = 0.0;
  double exponent = 0.0;
  int log_power = 0;
};

/// Leading behaviour multiplier * x^power * (1 + sum of corrections), with
/// corrections ordered from dominant to subdominant as x -> 0.
struct Jet {
  double multiplier = 1.0;
  double power = 1.0;
  std::vector<JetTerm> corrections;
};

/// First-order jet of a map, built by composing the jets of its parts.
Jet jet_of(const MapSpec& spec);

/// Degenerate 2-cycle with two hyperbolic saddles: corner maps x^r1, x^r2 and
/// transitions beta * y * (1 + alpha * y^(k-1)). nullopt encodes k = infinity.
struct TwoCycleSpec {
  double r1 = 1.0;
  double r2 = 1.0;
  double beta12 = 1.0;
  double beta21 = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  std::optional<int> k1;
  std::optional<int> k2;
  /// Caller's assertion that r1 is rational; such cycles are rejected when
  /// r1 * r2 = 1.
  bool resonant = false;
};

/// r1 * r2 within 1e-12 of 1.
bool is_unit_product(const TwoCycleSpec& spec);

/// Validates and returns the spec with every finite k whose alpha is zero
/// replaced by infinity.
TwoCycleSpec normalize(const TwoCycleSpec& spec);

/// Multiplier of the return map on side 1 (beta21 * beta12^r2) or side 2
/// (beta12 * beta21^r1).
double return_multiplier(const TwoCycleSpec& spec, int side);

struct FirstReturn {
  MapSpec map;
  /// Closed-form leading expansion.
  Jet expansion;
};

FirstReturn first_return(const TwoCycleSpec& spec, int side);

enum class MapKind { strongly_hyperbolic, hyperbolic, tangent, tangent_log, identity_like };

const char* to_string(MapKind kind);

struct Classification {
  MapKind kind = MapKind::identity_like;
  /// 1 + exponent of the leading correction; only meaningful for tangent kinds.
  double order = 0.0;
  double multiplier = 1.0;
  double power = 1.0;
};

Classification classify(const Jet& jet);
Classification classify_map(const MapSpec& spec);

/// 0 for hyperbolic kinds, 1 - 1/order for tangent kinds.
double orbit_dim_oracle(const Classification& c);

/// Orbit x_{n+1} = P(x_n) with count terms, stopped early once values drop
/// below the smallest normal double, then tail-cleaned.
MonotoneSequence orbit(const MapSpec& spec, double x0, std::size_t count);

/// Model return map of a saddle loop of the given codimension.
MapSpec saddle_loop_return_map(int codim);

/// Tangency order recovered from an orbit dimension: round(1/(1-d)), flagged
/// when 1/(1-d) is more than 0.15 from that integer.
struct TangencyEstimate {
  int order = 0;
  double raw = 0.0;
  bool flagged = false;
};

TangencyEstimate tangency_order_from_dim(double orbit_dim);

}  // namespace minkdim
