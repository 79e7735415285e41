#include "minkdim/retmaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace minkdim {

namespace {

constexpr double kUnitTolerance = 1e-12;

bool near_one(double v) { return std::abs(v - 1.0) <= kUnitTolerance; }

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::invalid_spec, std::string("map: ") + what + " must be finite");
  }
}

// Evaluation without domain checks. Composite intermediates must stay in (0,1);
// the outcome is reported through `ok` so the probe can use it as well.
double eval_raw(const MapSpec& spec, double x, bool& ok) {
  return std::visit(
      Overloaded{
          [&](const PowerMap& m) { return m.A * std::pow(x, m.r); },
          [&](const LinearMap& m) { return m.lambda * x; },
          [&](const TangentMap& m) { return x + m.C * std::pow(x, m.k); },
          [&](const TangentLogMap& m) { return x + m.C * std::pow(x, m.k) * (-std::log(x)); },
          [&](const CompositeMap& m) {
            double v = x;
            for (const auto& part : m.parts) {
              v = eval_raw(part, v, ok);
              if (!(v > 0.0 && v < 1.0)) {
                ok = false;
                return v;
              }
            }
            return v;
          },
      },
      spec.form);
}

double probe_x_max(const MapSpec& spec) {
  if (std::holds_alternative<PowerMap>(spec.form) || std::holds_alternative<LinearMap>(spec.form)) {
    return std::numeric_limits<double>::infinity();
  }
  double best = 0.0;
  double previous = 0.0;
  for (int i = 1; i <= 500; ++i) {
    const double x = i * 1e-3;
    bool ok = true;
    const double v = eval_raw(spec, x, ok);
    if (!ok || !(v > 0.0 && v < 1.0) || !(v > previous)) break;
    previous = v;
    best = x;
  }
  return best;
}

bool has_nonzero_tangent(const MapSpec& spec) {
  return std::visit(Overloaded{
                        [](const TangentMap& m) { return m.C != 0.0; },
                        [](const TangentLogMap& m) { return m.C != 0.0; },
                        [](const CompositeMap& m) {
                          return std::any_of(m.parts.begin(), m.parts.end(), has_nonzero_tangent);
                        },
                        [](const auto&) { return false; },
                    },
                    spec.form);
}

void normalize_terms(std::vector<JetTerm>& terms) {
  std::sort(terms.begin(), terms.end(), [](const JetTerm& a, const JetTerm& b) {
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    return a.log_power > b.log_power;
  });
  std::vector<JetTerm> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().log_power == t.log_power &&
        std::abs(merged.back().exponent - t.exponent) <=
            kUnitTolerance * std::max(1.0, std::abs(t.exponent))) {
      const double sum = merged.back().coefficient + t.coefficient;
      const double scale = std::abs(merged.back().coefficient) + std::abs(t.coefficient);
      merged.back().coefficient = std::abs(sum) <= kUnitTolerance * scale ? 0.0 : sum;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const JetTerm& t) { return t.coefficient == 0.0; });
  terms = std::move(merged);
}

// Jet of g(f(x)) to first order in the corrections.
Jet compose(const Jet& f, const Jet& g) {
  Jet out;
  out.multiplier = g.multiplier * std::pow(f.multiplier, g.power);
  out.power = f.power * g.power;
  for (const auto& c : f.corrections) {
    out.corrections.push_back({g.power * c.coefficient, c.exponent, c.log_power});
  }
  for (const auto& d : g.corrections) {
    out.corrections.push_back({d.coefficient * std::pow(f.multiplier, d.exponent) *
                                   std::pow(f.power, d.log_power),
                               f.power * d.exponent, d.log_power});
  }
  normalize_terms(out.corrections);
  return out;
}

}  // namespace

MapSpec power(double A, double r) { return {PowerMap{A, r}}; }
MapSpec linear(double lambda) { return {LinearMap{lambda}}; }
MapSpec tangent(int k, double C) { return {TangentMap{k, C}}; }
MapSpec tangent_log(int k, double C) { return {TangentLogMap{k, C}}; }
MapSpec composite(std::vector<MapSpec> parts) { return {CompositeMap{std::move(parts)}}; }

void validate(const MapSpec& spec) {
  std::visit(Overloaded{
                 [](const PowerMap& m) {
                   check_finite(m.A, "A");
                   check_finite(m.r, "r");
                   if (!(m.A > 0.0 && m.r > 0.0)) {
                     throw Error(ErrorCode::invalid_spec, "power map: need A > 0 and r > 0");
                   }
                 },
                 [](const LinearMap& m) {
                   check_finite(m.lambda, "lambda");
                   if (!(m.lambda > 0.0)) {
                     throw Error(ErrorCode::invalid_spec, "linear map: need lambda > 0");
                   }
                 },
                 [](const TangentMap& m) {
                   check_finite(m.C, "C");
                   if (m.k < 2 || m.C == 0.0) {
                     throw Error(ErrorCode::invalid_spec, "tangent map: need k >= 2 and C != 0");
                   }
                 },
                 [](const TangentLogMap& m) {
                   check_finite(m.C, "C");
                   if (m.k < 2 || m.C == 0.0) {
                     throw Error(ErrorCode::invalid_spec,
                                 "tangent-log map: need k >= 2 and C != 0");
                   }
                 },
                 [](const CompositeMap& m) {
                   if (m.parts.empty()) {
                     throw Error(ErrorCode::invalid_spec, "composite map: no parts");
                   }
                   for (const auto& p : m.parts) validate(p);
                 },
             },
             spec.form);
}

Map::Map(MapSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  x_max_ = probe_x_max(spec_);
  if (!(x_max_ > 0.0)) {
    throw Error(ErrorCode::invalid_spec, "map: not monotone into (0,1) anywhere on the probe grid");
  }
}

double Map::operator()(double x) const {
  if (!(x > 0.0) || x > x_max_) {
    std::ostringstream os;
    os << "map: x = " << x << " outside (0, " << x_max_ << "]";
    throw Error(ErrorCode::out_of_domain, os.str());
  }
  bool ok = true;
  const double v = eval_raw(spec_, x, ok);
  if (!ok) {
    std::ostringstream os;
    os << "map: composite leaves (0,1) at x = " << x;
    throw Error(ErrorCode::out_of_domain, os.str());
  }
  return v;
}

double eval_map(const MapSpec& spec, double x) { return Map(spec)(x); }

Jet jet_of(const MapSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PowerMap& m) { return Jet{m.A, m.r, {}}; },
          [](const LinearMap& m) { return Jet{m.lambda, 1.0, {}}; },
          [](const TangentMap& m) {
            return Jet{1.0, 1.0, {{m.C, static_cast<double>(m.k - 1), 0}}};
          },
          [](const TangentLogMap& m) {
            return Jet{1.0, 1.0, {{m.C, static_cast<double>(m.k - 1), 1}}};
          },
          [](const CompositeMap& m) {
            Jet acc{1.0, 1.0, {}};
            for (const auto& part : m.parts) acc = compose(acc, jet_of(part));
            return acc;
          },
      },
      spec.form);
}

bool is_unit_product(const TwoCycleSpec& spec) { return near_one(spec.r1 * spec.r2); }

TwoCycleSpec normalize(const TwoCycleSpec& in) {
  TwoCycleSpec s = in;
  for (double v : {s.r1, s.r2, s.beta12, s.beta21, s.alpha1, s.alpha2}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_spec, "two-cycle: non-finite parameter");
  }
  if (!(s.r1 > 0.0 && s.r2 > 0.0)) {
    throw Error(ErrorCode::invalid_spec, "two-cycle: hyperbolicity ratios must be positive");
  }
  if (!(s.beta12 > 0.0 && s.beta21 > 0.0)) {
    throw Error(ErrorCode::invalid_spec, "two-cycle: transition multipliers must be positive");
  }
  auto fix = [](std::optional<int>& k, double alpha, const char* name) {
    if (k && *k < 2) {
      throw Error(ErrorCode::invalid_spec, std::string("two-cycle: ") + name + " must be >= 2");
    }
    if (!k && alpha != 0.0) {
      throw Error(ErrorCode::invalid_spec,
                  std::string("two-cycle: ") + name + " = infinity requires a zero alpha");
    }
    if (k && alpha == 0.0) k.reset();
  };
  fix(s.k1, s.alpha1, "k1");
  fix(s.k2, s.alpha2, "k2");

  if (!is_unit_product(s)) return s;
  if (s.resonant) {
    throw Error(ErrorCode::resonant,
                "two-cycle: r1 * r2 = 1 with rational r1 is outside the supported families");
  }
  if (!s.k1 && !s.k2) {
    if (near_one(return_multiplier(s, 1))) {
      throw Error(ErrorCode::trivial_cycle,
                  "two-cycle: unit multiplier and no corrections, the first return map is the "
                  "identity");
    }
    return s;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double e1 = s.k1 ? *s.k1 - 1.0 : inf;
  const double e2 = s.k2 ? *s.k2 - 1.0 : inf;
  const bool first = e1 < s.r1 * e2;
  const bool second = e2 < s.r2 * e1;
  if (first == second) {
    throw Error(ErrorCode::inequality,
                "two-cycle: exactly one of the inequalities k1-1 < r1(k2-1), k2-1 < r2(k1-1) "
                "must hold");
  }
  return s;
}

double return_multiplier(const TwoCycleSpec& spec, int side) {
  if (side == 1) return spec.beta21 * std::pow(spec.beta12, spec.r2);
  if (side == 2) return spec.beta12 * std::pow(spec.beta21, spec.r1);
  throw Error(ErrorCode::invalid_argument, "side must be 1 or 2");
}

FirstReturn first_return(const TwoCycleSpec& input, int side) {
  if (side != 1 && side != 2) throw Error(ErrorCode::invalid_argument, "side must be 1 or 2");
  const TwoCycleSpec s = normalize(input);

  // Transition beta * y * (1 + alpha y^(k-1)) as tangent followed by linear.
  auto transition = [](std::vector<MapSpec>& out, std::optional<int> k, double alpha,
                       double beta) {
    if (k) out.push_back(tangent(*k, alpha));
    out.push_back(linear(beta));
  };
  // Side 1 starts on the transversal entering saddle 1, side 2 on the other.
  const double ra = side == 1 ? s.r1 : s.r2;
  const double rb = side == 1 ? s.r2 : s.r1;
  const auto ka = side == 1 ? s.k2 : s.k1;
  const auto kb = side == 1 ? s.k1 : s.k2;
  const double alpha_a = side == 1 ? s.alpha2 : s.alpha1;
  const double alpha_b = side == 1 ? s.alpha1 : s.alpha2;
  const double beta_a = side == 1 ? s.beta12 : s.beta21;
  const double beta_b = side == 1 ? s.beta21 : s.beta12;

  std::vector<MapSpec> parts;
  parts.push_back(power(1.0, ra));
  transition(parts, ka, alpha_a, beta_a);
  parts.push_back(power(1.0, rb));
  transition(parts, kb, alpha_b, beta_b);

  Jet jet;
  jet.multiplier = beta_b * std::pow(beta_a, rb);
  jet.power = ra * rb;
  if (kb) {
    jet.corrections.push_back(
        {alpha_b * std::pow(beta_a, rb * (*kb - 1)), ra * rb * (*kb - 1), 0});
  }
  if (ka) jet.corrections.push_back({rb * alpha_a, ra * (*ka - 1), 0});
  normalize_terms(jet.corrections);
  return {composite(std::move(parts)), std::move(jet)};
}

const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::strongly_hyperbolic: return "strongly-hyperbolic";
    case MapKind::hyperbolic: return "hyperbolic";
    case MapKind::tangent: return "tangent";
    case MapKind::tangent_log: return "tangent-log";
    case MapKind::identity_like: return "identity-like";
  }
  return "unknown";
}

Classification classify(const Jet& jet) {
  Classification c;
  c.multiplier = jet.multiplier;
  c.power = jet.power;
  if (!near_one(jet.power)) {
    c.kind = MapKind::strongly_hyperbolic;
  } else if (!near_one(jet.multiplier)) {
    c.kind = MapKind::hyperbolic;
  } else if (jet.corrections.empty()) {
    c.kind = MapKind::identity_like;
  } else {
    const JetTerm& lead = jet.corrections.front();
    c.kind = lead.log_power > 0 ? MapKind::tangent_log : MapKind::tangent;
    c.order = 1.0 + lead.exponent;
  }
  return c;
}

Classification classify_map(const MapSpec& spec) {
  validate(spec);
  const Classification c = classify(jet_of(spec));
  if (c.kind == MapKind::identity_like && has_nonzero_tangent(spec)) {
    throw Error(ErrorCode::contradictory,
                "classify_map: corrections cancel to a unit multiplier with no surviving terms");
  }
  return c;
}

double orbit_dim_oracle(const Classification& c) {
  switch (c.kind) {
    case MapKind::strongly_hyperbolic:
    case MapKind::hyperbolic: return 0.0;
    case MapKind::tangent:
    case MapKind::tangent_log: return 1.0 - 1.0 / c.order;
    case MapKind::identity_like: break;
  }
  throw Error(ErrorCode::invalid_argument, "orbit_dim_oracle: identity-like map has no orbits");
}

MonotoneSequence orbit(const MapSpec& spec, double x0, std::size_t count) {
  if (count < kMinAsymptoticLength) {
    throw Error(ErrorCode::invalid_argument, "orbit: need at least 16 terms");
  }
  const Map map(spec);
  std::vector<double> values;
  values.reserve(count);
  values.push_back(x0);
  const double floor = std::numeric_limits<double>::min();
  while (values.size() < count) {
    const double next = map(values.back());
    if (values.size() <= 3 && !(next < values.back())) {
      std::ostringstream os;
      os << "orbit: iterate " << values.size() << " does not decrease (" << values.back()
         << " -> " << next << ")";
      throw Error(ErrorCode::non_contracting, os.str());
    }
    if (next < floor) break;
    values.push_back(next);
  }
  auto cleaned = clean_sequence_tail(values, "orbit", 2);
  if (!cleaned.sequence) throw Error(ErrorCode::invalid_sequence, cleaned.report.message);
  return std::move(*cleaned.sequence);
}

MapSpec saddle_loop_return_map(int codim) {
  if (codim < 1) throw Error(ErrorCode::invalid_argument, "saddle loop: codimension must be >= 1");
  if (codim == 1) return power(1.0, 2.0);
  if (codim == 2) return linear(0.5);
  if (codim % 2 == 0) return tangent(codim / 2, -1.0);
  return tangent_log((codim + 1) / 2, -1.0);
}

TangencyEstimate tangency_order_from_dim(double orbit_dim) {
  if (!(orbit_dim >= 0.0 && orbit_dim < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "tangency order: orbit dimension must lie in [0,1)");
  }
  TangencyEstimate t;
  t.raw = 1.0 / (1.0 - orbit_dim);
  t.order = static_cast<int>(std::lround(t.raw));
  t.flagged = std::abs(t.raw - t.order) > 0.15;
  return t;
}

}  // namespace minkdim
