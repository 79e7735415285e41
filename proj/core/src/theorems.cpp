#include "minkdim/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace minkdim {

namespace {

void require_unit_interval(double d, const char* what) {
  if (!(d >= 0.0 && d < 1.0)) {
    std::ostringstream os;
    os << what << ": dimension " << d << " outside [0,1)";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("consistency_report[") + name + "]: " + e.what());
  }
}

}  // namespace

double predict_corner_dim(double seq_dim) {
  require_unit_interval(seq_dim, "predict_corner_dim");
  return 1.0 + seq_dim;
}

double predict_polycycle_dim(std::span<const double> seq_dims) {
  if (seq_dims.empty()) {
    throw Error(ErrorCode::invalid_argument, "predict_polycycle_dim: no corner dimensions");
  }
  for (double d : seq_dims) require_unit_interval(d, "predict_polycycle_dim");
  return 1.0 + *std::max_element(seq_dims.begin(), seq_dims.end());
}

double saddle_loop_dim(int codim) {
  if (codim < 1) throw Error(ErrorCode::invalid_argument, "saddle_loop_dim: codimension must be >= 1");
  const int even = codim % 2 == 0 ? codim : codim + 1;
  return 2.0 - 2.0 / even;
}

GuardedFloor guarded_floor(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "guarded_floor: non-finite value");
  const double nearest = std::round(v);
  GuardedFloor out;
  if (std::abs(v - nearest) <= kFloorGuard) {
    out.value = static_cast<long>(nearest);
    out.guarded = v != nearest;
  } else {
    out.value = static_cast<long>(std::floor(v));
  }
  return out;
}

EpsilonResult mourtada_epsilon(double r1, std::optional<int> k1, std::optional<int> k2) {
  if (!(r1 > 0.0) || !std::isfinite(r1)) {
    throw Error(ErrorCode::invalid_argument, "mourtada_epsilon: r1 must be positive");
  }
  if ((k1 && *k1 < 2) || (k2 && *k2 < 2)) {
    throw Error(ErrorCode::invalid_argument, "mourtada_epsilon: finite k must be >= 2");
  }
  if (!k1 && !k2) {
    throw Error(ErrorCode::invalid_argument, "mourtada_epsilon: k1 and k2 cannot both be infinite");
  }
  const double r2 = 1.0 / r1;
  const double inf = std::numeric_limits<double>::infinity();
  const double e1 = k1 ? *k1 - 1.0 : inf;
  const double e2 = k2 ? *k2 - 1.0 : inf;
  const bool first = e1 < r1 * e2;
  const bool second = e2 < r2 * e1;
  if (first == second) {
    throw Error(ErrorCode::inequality,
                "mourtada_epsilon: exactly one of the inequalities k1-1 < r1(k2-1), "
                "k2-1 < r2(k1-1) must hold");
  }
  EpsilonResult out;
  out.branch = first ? 1 : 2;
  const int k = first ? *k1 : *k2;
  const double ratio = first ? r1 : r2;
  const GuardedFloor f = guarded_floor((k - 1) / ratio);
  out.value = 2 + k + static_cast<int>(f.value);
  out.guard_triggered = f.guarded;
  return out;
}

BoundResult cyclicity_bound(double d, double r) {
  if (!(d >= 1.0)) throw Error(ErrorCode::invalid_argument, "cyclicity_bound: need d >= 1");
  if (d >= 2.0 - 1e-6) {
    throw Error(ErrorCode::singular, "cyclicity_bound: d too close to 2");
  }
  if (!(r > 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "cyclicity_bound: need 0 < r <= 1");
  }
  const GuardedFloor f = guarded_floor(3.0 + (1.0 + r) * (d - 1.0) / (2.0 - d));
  return {static_cast<int>(f.value), f.guarded};
}

RecoveredRatio recover_r(double d1, double d2) {
  if (!(d1 > 0.0 && d1 < 1.0 && d2 > 0.0 && d2 < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "recover_r: orbit dimensions must lie in (0,1)");
  }
  if (d1 == d2) return {1.0, true};
  return {std::min((d1 - 1.0) / (d2 - 1.0), (d2 - 1.0) / (d1 - 1.0)), false};
}

double ratio_from_orders(double order1, double order2) {
  if (!(order1 > 1.0 && order2 > 1.0)) {
    throw Error(ErrorCode::invalid_argument, "ratio_from_orders: orders must exceed 1");
  }
  return std::min((order1 - 1.0) / (order2 - 1.0), (order2 - 1.0) / (order1 - 1.0));
}

const char* to_string(ProofCase c) {
  switch (c) {
    case ProofCase::hyperbolic: return "cyclicity <= 3";
    case ProofCase::r1_above_one: return "r1 > 1";
    case ProofCase::r1_below_one: return "r1 < 1";
  }
  return "unknown";
}

ConsistencyReport consistency_report(const TwoCycleSpec& input) {
  ConsistencyReport rep;
  const TwoCycleSpec s = stage("normalize", [&] { return normalize(input); });
  const FirstReturn p1 = stage("first_return", [&] { return first_return(s, 1); });
  const FirstReturn p2 = stage("first_return", [&] { return first_return(s, 2); });
  rep.side1 = stage("classify", [&] { return classify_map(p1.map); });
  rep.side2 = stage("classify", [&] { return classify_map(p2.map); });
  if (classify(p1.expansion).kind != rep.side1.kind ||
      classify(p2.expansion).kind != rep.side2.kind) {
    rep.warnings.emplace_back("closed-form expansion and composed jet classify differently");
  }
  rep.d1 = stage("oracle", [&] { return orbit_dim_oracle(rep.side1); });
  rep.d2 = stage("oracle", [&] { return orbit_dim_oracle(rep.side2); });

  const bool tangent1 = rep.side1.kind == MapKind::tangent || rep.side1.kind == MapKind::tangent_log;
  const bool tangent2 = rep.side2.kind == MapKind::tangent || rep.side2.kind == MapKind::tangent_log;
  if (tangent1 != tangent2) {
    throw Error(ErrorCode::contradictory,
                "consistency_report[classify]: return maps disagree on hyperbolicity");
  }
  if (!tangent1) {
    rep.proof_case = ProofCase::hyperbolic;
    rep.d = 1.0;
    rep.bound = 3;
    return rep;
  }

  rep.proof_case = s.r1 > 1.0 ? ProofCase::r1_above_one : ProofCase::r1_below_one;
  rep.d = 1.0 + std::max(rep.d1, rep.d2);
  const RecoveredRatio rd = stage("recover_r", [&] { return recover_r(rep.d1, rep.d2); });
  if (rd.warning) rep.warnings.emplace_back("equal orbit dimensions, r recovered as 1");
  rep.r_from_dims = rd.r;
  rep.r_from_orders =
      stage("recover_r", [&] { return ratio_from_orders(rep.side1.order, rep.side2.order); });

  const BoundResult b = stage("cyclicity_bound", [&] { return cyclicity_bound(rep.d, *rep.r_from_orders); });
  const BoundResult bd = stage("cyclicity_bound", [&] { return cyclicity_bound(rep.d, rd.r); });
  const EpsilonResult eps = stage("epsilon", [&] { return mourtada_epsilon(s.r1, s.k1, s.k2); });
  rep.bound = b.value;
  rep.bound_from_dims_r = bd.value;
  rep.epsilon = eps.value;
  if (b.guard_triggered || eps.guard_triggered) {
    rep.warnings.emplace_back("near-integer floor guard triggered");
  }
  rep.consistent = rep.bound == eps.value;
  if (*rep.bound_from_dims_r != eps.value) {
    rep.warnings.emplace_back("bound using r from orbit-dimension ratios differs from epsilon");
  }
  return rep;
}

}  // namespace minkdim
