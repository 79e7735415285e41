#include "minkdim/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace minkdim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kLogMinNormal = std::log(std::numeric_limits<double>::min());
// Sampling stops once x reaches twice the smallest normal; the final point is
// then placed at the smallest normal so x keeps strictly decreasing.
const double kLogClampStart = kLogMinNormal + std::numbers::ln2;

double distance_to_chord(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  if (len_sq == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Recursive chord-error subdivision of a parametrized curve on [u0, u1]. Each
// piece is probed at its midpoint and quarter points.
template <class Curve>
std::vector<Point> sample_adaptive(Curve&& at, double u0, double u1, double tol,
                                   int initial_pieces) {
  struct Piece {
    double ua, ub;
    Point pa, pb;
    int depth;
  };
  constexpr int kMaxDepth = 60;
  std::vector<Point> out;
  out.push_back(at(u0));

  std::vector<Piece> stack;
  std::vector<Point> nodes;
  for (int i = 0; i <= initial_pieces; ++i) {
    nodes.push_back(i == 0 ? out.front() : at(u0 + (u1 - u0) * i / initial_pieces));
  }
  for (int i = initial_pieces - 1; i >= 0; --i) {
    stack.push_back({u0 + (u1 - u0) * i / initial_pieces, u0 + (u1 - u0) * (i + 1) / initial_pieces,
                     nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(i) + 1],
                     0});
  }
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    const double um = 0.5 * (p.ua + p.ub);
    const Point pm = at(um);
    bool split = false;
    if (p.depth < kMaxDepth) {
      split = distance_to_chord(pm, p.pa, p.pb) > tol ||
              distance_to_chord(at(0.5 * (p.ua + um)), p.pa, p.pb) > tol ||
              distance_to_chord(at(0.5 * (um + p.ub)), p.pa, p.pb) > tol;
    }
    if (split) {
      stack.push_back({um, p.ub, pm, p.pb, p.depth + 1});
      stack.push_back({p.ua, um, p.pa, pm, p.depth + 1});
    } else {
      out.push_back(p.pb);
    }
  }
  return out;
}

void require_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::invalid_argument, "chord tolerance must be positive");
  }
}

void require_entry(double y0) {
  if (!(y0 > 0.0 && y0 < 1.0)) {
    throw Error(ErrorCode::out_of_domain, "entry coordinate y0 must lie in (0,1)");
  }
}

// Graph curve x = exp(log_x(ln y)) from y0 to 1, clamped at the smallest
// normal. exact_exit is used for the final x when no clamping occurs.
template <class LogX>
TrajectorySegment graph_curve(LogX&& log_x_of_u, double y0, double u_clamp, double exact_exit,
                              double tol) {
  const double u0 = std::log(y0);
  const bool clamped = u_clamp < 0.0;
  const double u_end = clamped ? u_clamp : 0.0;
  auto at = [&](double u) { return Point{std::exp(log_x_of_u(u)), std::exp(u)}; };

  TrajectorySegment seg;
  seg.chord_tolerance = tol;
  seg.clamped = clamped;
  seg.points = sample_adaptive(at, u0, u_end, tol, 16);
  seg.points.front() = {1.0, y0};
  if (clamped) {
    seg.points.push_back({std::numeric_limits<double>::min(), 1.0});
  } else {
    seg.points.back() = {exact_exit, 1.0};
  }
  return seg;
}

}  // namespace

void validate(const SaddleSpec& spec) {
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) {
    throw Error(ErrorCode::invalid_spec, "saddle: alpha must lie in (0,1]");
  }
  for (const auto& t : spec.perturbation) {
    if (t.x_power < 1 || t.y_power < 2) {
      throw Error(ErrorCode::invalid_spec, "saddle: perturbation terms must be divisible by x*y^2");
    }
  }
}

void validate(const SemiHypSpec& spec) {
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) {
    throw Error(ErrorCode::invalid_spec, "semi-hyperbolic: alpha must be positive");
  }
  if (spec.m < 2) throw Error(ErrorCode::invalid_spec, "semi-hyperbolic: m must be >= 2");
  for (const auto& t : spec.perturbation) {
    if (t.y_power < 2 * spec.m - 1 || t.x_power < 0) {
      throw Error(ErrorCode::invalid_spec,
                  "semi-hyperbolic: perturbation terms must have y-order >= 2m-1");
    }
  }
}

void validate(const CornerSpec& spec) {
  std::visit([](const auto& s) { validate(s); }, spec);
}

double saddle_x(double alpha, double y0, double y) { return std::pow(y0 / y, 1.0 / alpha); }

double semihyp_log_x(double alpha, int m, double y0, double y) {
  const double e = 1.0 - m;
  return (std::pow(y, e) - std::pow(y0, e)) / (alpha * (m - 1));
}

TrajectorySegment saddle_trajectory(const SaddleSpec& spec, double y0, double chord_tolerance) {
  validate(spec);
  if (!spec.perturbation.empty()) {
    throw Error(ErrorCode::invalid_spec, "saddle_trajectory: closed form needs h = 0");
  }
  require_entry(y0);
  require_tolerance(chord_tolerance);
  const double alpha = spec.alpha;
  const double log_y0 = std::log(y0);
  // log x = (ln y0 - u) / alpha reaches the clamp level at u_clamp.
  const double u_clamp = log_y0 - alpha * kLogClampStart;
  return graph_curve([&](double u) { return (log_y0 - u) / alpha; }, y0, u_clamp,
                     std::pow(y0, 1.0 / alpha), chord_tolerance);
}

TrajectorySegment semihyp_trajectory(const SemiHypSpec& spec, double y0, double chord_tolerance) {
  validate(spec);
  if (!spec.perturbation.empty()) {
    throw Error(ErrorCode::invalid_spec, "semihyp_trajectory: closed form needs h = 0");
  }
  require_entry(y0);
  require_tolerance(chord_tolerance);
  const double alpha = spec.alpha;
  const int m = spec.m;
  const double e = 1.0 - m;
  const double log_exit = semihyp_log_x(alpha, m, y0, 1.0);
  double u_clamp = 0.0;
  if (log_exit < kLogClampStart) {
    const double target = std::pow(y0, e) + alpha * (m - 1) * kLogClampStart;
    u_clamp = std::log(target) / e;
  }
  return graph_curve([&](double u) { return semihyp_log_x(alpha, m, y0, std::exp(u)); }, y0,
                     u_clamp, std::exp(log_exit), chord_tolerance);
}

// ---------------------------------------------------------------------------
// Integration in (log x, y) so the contracting direction never underflows.
// ---------------------------------------------------------------------------

namespace {

struct State {
  double log_x;
  double y;
};

class CornerField {
 public:
  explicit CornerField(const CornerSpec& spec) {
    std::visit(
        [this](const auto& s) {
          alpha_ = s.alpha;
          terms_ = s.perturbation;
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SemiHypSpec>) m_ = s.m;
        },
        spec);
  }

  State operator()(const State& s) const {
    const double x = std::exp(s.log_x);
    double dy = alpha_ * (m_ == 1 ? s.y : std::pow(s.y, m_));
    for (const auto& t : terms_) dy += t.coefficient * std::pow(x, t.x_power) * std::pow(s.y, t.y_power);
    return {-1.0, dy};
  }

 private:
  double alpha_ = 1.0;
  int m_ = 1;
  std::vector<Monomial> terms_;
};

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
  State next;
  double error;
};

StepResult dp45_step(const CornerField& f, const State& s, double h) {
  auto add = [](const State& base, double h, std::initializer_list<std::pair<double, State>> ks) {
    State out = base;
    for (const auto& [w, k] : ks) {
      out.log_x += h * w * k.log_x;
      out.y += h * w * k.y;
    }
    return out;
  };
  const State k1 = f(s);
  const State k2 = f(add(s, h, {{a21, k1}}));
  const State k3 = f(add(s, h, {{a31, k1}, {a32, k2}}));
  const State k4 = f(add(s, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
  const State k5 = f(add(s, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
  const State k6 = f(add(s, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
  const State next = add(s, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
  const State k7 = f(next);
  const double ex = h * (e1 * k1.log_x + e3 * k3.log_x + e4 * k4.log_x + e5 * k5.log_x +
                         e6 * k6.log_x + e7 * k7.log_x);
  const double ey =
      h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y + e7 * k7.y);
  (void)c2;
  (void)c3;
  (void)c4;
  (void)c5;
  return {next, std::max(std::abs(ex), std::abs(ey))};
}

Point to_point(const State& s, bool& clamped) {
  if (s.log_x < kLogMinNormal) {
    clamped = true;
    return {std::numeric_limits<double>::min(), s.y};
  }
  return {std::exp(s.log_x), s.y};
}

}  // namespace

TrajectorySegment integrate_trajectory(const CornerSpec& field, Point start,
                                       const IntegrationOptions& options) {
  validate(field);
  require_tolerance(options.chord_tolerance);
  if (!(start.x > 0.0 && start.x <= 1.0 && start.y > 0.0 && start.y <= 1.0)) {
    throw Error(ErrorCode::out_of_domain, "integrate_trajectory: start must lie in (0,1]x(0,1]");
  }
  TrajectorySegment seg;
  seg.chord_tolerance = options.chord_tolerance;
  seg.points.push_back(start);
  if (start.y >= 1.0) {
    seg.degenerate = true;
    return seg;
  }

  const CornerField f(field);
  State s{std::log(start.x), start.y};
  double h = 1e-3;
  bool clamped = false;
  for (std::size_t step = 0; step < options.max_steps; ++step) {
    if (h < 1e-14) throw Error(ErrorCode::step_underflow, "integrate_trajectory: step underflow");
    const StepResult r = dp45_step(f, s, h);
    const double allowed = options.local_tolerance * h;
    if (!std::isfinite(r.next.y) || !std::isfinite(r.next.log_x) || r.error > allowed) {
      const double factor =
          std::isfinite(r.error) && r.error > 0.0 ? 0.9 * std::pow(allowed / r.error, 0.2) : 0.1;
      h *= std::clamp(factor, 0.1, 0.9);
      continue;
    }
    if (r.next.y < 1.0) {
      // Chord check against the half-step solution.
      const State mid = dp45_step(f, s, 0.5 * h).next;
      bool dummy = false;
      const Point pa = to_point(s, dummy);
      const Point pb = to_point(r.next, dummy);
      const Point pm = to_point(mid, dummy);
      if (distance_to_chord(pm, pa, pb) > options.chord_tolerance) {
        h *= 0.5;
        continue;
      }
      if (!(r.next.y > 0.0) || r.next.y < 1e-300) {
        throw Error(ErrorCode::left_domain, "integrate_trajectory: trajectory left through y -> 0");
      }
      s = r.next;
      seg.points.push_back(to_point(s, clamped));
      const double grow = r.error > 0.0 ? 0.9 * std::pow(allowed / r.error, 0.2) : 5.0;
      h *= std::clamp(grow, 1.0, 5.0);
      continue;
    }
    // Crossing inside this step: bisect on the step length.
    double lo = 0.0;
    double hi = h;
    State cross = r.next;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const State trial = dp45_step(f, s, mid).next;
      cross = trial;
      if (std::abs(trial.y - 1.0) <= options.crossing_tolerance) break;
      if (trial.y < 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Point last = to_point(cross, clamped);
    last.y = 1.0;
    if (last == seg.points.back()) seg.points.pop_back();
    seg.points.push_back(last);
    seg.clamped = clamped;
    return seg;
  }
  throw Error(ErrorCode::left_domain, "integrate_trajectory: no crossing of y = 1 within step limit");
}

TrajectoryBundle build_bundle(const CornerSpec& field, const MonotoneSequence& entry,
                              double chord_tolerance) {
  validate(field);
  require_tolerance(chord_tolerance);
  for (double y : entry.values()) require_entry(y);

  const bool perturbed = std::visit([](const auto& s) { return !s.perturbation.empty(); }, field);
  std::vector<TrajectorySegment> segments;
  segments.reserve(entry.size());
  for (std::size_t n = 0; n < entry.size(); ++n) {
    TrajectorySegment seg;
    if (perturbed) {
      IntegrationOptions opts;
      opts.chord_tolerance = chord_tolerance;
      seg = integrate_trajectory(field, {1.0, entry[n]}, opts);
    } else if (const auto* saddle = std::get_if<SaddleSpec>(&field)) {
      seg = saddle_trajectory(*saddle, entry[n], chord_tolerance);
    } else {
      seg = semihyp_trajectory(std::get<SemiHypSpec>(field), entry[n], chord_tolerance);
    }
    seg.source_index = n;
    segments.push_back(std::move(seg));
  }

  std::vector<double> exits;
  for (const auto& seg : segments) {
    if (seg.clamped) break;
    exits.push_back(seg.back().x);
  }
  auto cleaned = clean_sequence_tail(exits, "exit of " + entry.origin_tag(), 2);
  if (!cleaned.sequence) {
    throw Error(ErrorCode::invalid_sequence, "build_bundle: exit sequence rejected: " +
                                                 cleaned.report.message);
  }
  return TrajectoryBundle::assemble(std::move(segments), entry, std::move(*cleaned.sequence));
}

// ---------------------------------------------------------------------------
// Spirals
// ---------------------------------------------------------------------------

namespace {

// Angular step keeping the chord error of a circle of radius r below tol,
// capped at 1/64 of a turn.
double angular_step(double r, double tol) {
  const double cap = kTwoPi / 64.0;
  if (r <= tol) return cap;
  return std::min(cap, 2.0 * std::acos(1.0 - tol / r));
}

template <class Radius>
std::vector<Point> sample_spiral(Radius&& radius, double phi_end, double tol) {
  std::vector<Point> pts;
  double phi = 0.0;
  while (true) {
    const double r = radius(phi);
    pts.push_back({r * std::cos(phi), r * std::sin(phi)});
    if (phi >= phi_end) break;
    phi = std::min(phi_end, phi + angular_step(r, tol));
  }
  return pts;
}

}  // namespace

void validate(const FocusSpec& spec) {
  if (spec.k < 1) throw Error(ErrorCode::invalid_spec, "focus: k must be >= 1");
  if (!(spec.r0 > 0.0 && spec.r0 < 1.0)) {
    throw Error(ErrorCode::invalid_spec, "focus: r0 must lie in (0,1)");
  }
}

void validate(const LimitCycleSpec& spec) {
  if (!(spec.a > 0.0) || !std::isfinite(spec.a)) {
    throw Error(ErrorCode::invalid_spec, "limit cycle: radius a must be positive");
  }
  if (spec.m < 1) throw Error(ErrorCode::invalid_spec, "limit cycle: multiplicity must be >= 1");
  if (!(spec.r0 > 0.0) || spec.r0 == spec.a) {
    throw Error(ErrorCode::invalid_spec, "limit cycle: r0 must be positive and differ from a");
  }
  const bool outside = spec.r0 > spec.a;
  if (outside != (spec.side == CycleSide::outside)) {
    throw Error(ErrorCode::invalid_spec, "limit cycle: r0 lies on the wrong side of the cycle");
  }
}

double focus_radius(const FocusSpec& spec, double phi) {
  const double two_k = 2.0 * spec.k;
  return std::pow(std::pow(spec.r0, -two_k) + two_k * phi, -1.0 / two_k);
}

TrajectorySegment focus_spiral(const FocusSpec& spec, const SpiralSampling& sampling) {
  validate(spec);
  require_tolerance(sampling.chord_tolerance);
  if (spec.turns < 100) throw Error(ErrorCode::invalid_argument, "focus_spiral: need >= 100 turns");
  const double phi_end = kTwoPi * static_cast<double>(spec.turns);
  const double r_end = focus_radius(spec, phi_end);
  if (!(r_end < sampling.delta_min)) {
    std::ostringstream os;
    os << "focus_spiral: final radius " << r_end << " not below delta_min " << sampling.delta_min
       << "; increase turns";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  TrajectorySegment seg;
  seg.chord_tolerance = sampling.chord_tolerance;
  seg.points = sample_spiral([&](double phi) { return focus_radius(spec, phi); }, phi_end,
                             sampling.chord_tolerance);
  return seg;
}

MonotoneSequence focus_transversal_orbit(const FocusSpec& spec, std::size_t count) {
  validate(spec);
  std::vector<double> radii(count);
  for (std::size_t n = 0; n < count; ++n) {
    radii[n] = focus_radius(spec, kTwoPi * static_cast<double>(n));
  }
  return require_sequence(radii, "focus transversal");
}

double limit_cycle_offset(const LimitCycleSpec& spec, double phi) {
  const double u0 = std::abs(spec.r0 - spec.a);
  if (spec.m == 1) return u0 * std::exp(-phi);
  const double e = 1.0 - spec.m;
  return std::pow(std::pow(u0, e) + (spec.m - 1) * phi, 1.0 / e);
}

TrajectorySegment limit_cycle_spiral(const LimitCycleSpec& spec, const SpiralSampling& sampling) {
  validate(spec);
  require_tolerance(sampling.chord_tolerance);
  if (spec.turns < 100) {
    throw Error(ErrorCode::invalid_argument, "limit_cycle_spiral: need >= 100 turns");
  }
  const double u0 = std::abs(spec.r0 - spec.a);
  const double u_stop = sampling.delta_min / 10.0;
  double phi_stop = 0.0;
  if (u0 > u_stop) {
    if (spec.m == 1) {
      phi_stop = std::log(u0 / u_stop);
    } else {
      const double e = 1.0 - spec.m;
      phi_stop = (std::pow(u_stop, e) - std::pow(u0, e)) / (spec.m - 1);
    }
  }
  if (phi_stop > kTwoPi * static_cast<double>(spec.turns)) {
    std::ostringstream os;
    os << "limit_cycle_spiral: reaching |r-a| < " << u_stop << " needs "
       << std::ceil(phi_stop / kTwoPi) << " turns, budget is " << spec.turns;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  const double sign = spec.side == CycleSide::outside ? 1.0 : -1.0;
  TrajectorySegment seg;
  seg.chord_tolerance = sampling.chord_tolerance;
  seg.points = sample_spiral(
      [&](double phi) { return spec.a + sign * limit_cycle_offset(spec, phi); }, phi_stop,
      sampling.chord_tolerance);
  return seg;
}

MonotoneSequence limit_cycle_transversal_orbit(const LimitCycleSpec& spec, std::size_t count) {
  validate(spec);
  std::vector<double> offsets(count);
  for (std::size_t n = 0; n < count; ++n) {
    offsets[n] = limit_cycle_offset(spec, kTwoPi * static_cast<double>(n));
  }
  auto cleaned = clean_sequence_tail(offsets, "limit-cycle transversal", 2);
  if (!cleaned.sequence) throw Error(ErrorCode::invalid_sequence, cleaned.report.message);
  return std::move(*cleaned.sequence);
}

}  // namespace minkdim
