#include "minkdim/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace minkdim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_sequence: return "invalid-sequence";
    case ErrorCode::delta_too_large: return "delta-too-large";
    case ErrorCode::truncation: return "truncation";
    case ErrorCode::cell_budget: return "cell-budget";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::sampling_too_coarse: return "sampling-too-coarse";
    case ErrorCode::step_underflow: return "step-underflow";
    case ErrorCode::left_domain: return "left-domain";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::non_contracting: return "non-contracting";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::resonant: return "resonant";
    case ErrorCode::trivial_cycle: return "trivial-cycle";
    case ErrorCode::inequality: return "inequality";
    case ErrorCode::contradictory: return "contradictory";
    case ErrorCode::singular: return "singular";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

const char* to_string(SequenceViolation v) {
  switch (v) {
    case SequenceViolation::none: return "none";
    case SequenceViolation::too_short: return "too-short";
    case SequenceViolation::non_positive: return "non-positive";
    case SequenceViolation::non_monotone: return "non-monotone";
    case SequenceViolation::gaps_increasing: return "gaps-increasing";
  }
  return "unknown";
}

struct SequenceAccess {
  static MonotoneSequence make(std::vector<double> values, std::string tag) {
    return MonotoneSequence(std::move(values), std::move(tag));
  }
};

namespace {

struct Violation {
  SequenceViolation kind = SequenceViolation::none;
  std::size_t index = 0;
};

// Scans for the first broken invariant. A gap violation is attributed to the
// later gap, so [1, 0.9, 0.5] fails at 1.
Violation first_violation(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) return {SequenceViolation::non_positive, i};
    if (i > 0 && !(v[i - 1] > v[i])) return {SequenceViolation::non_monotone, i};
    if (i > 1 && (v[i - 2] - v[i - 1]) < (v[i - 1] - v[i])) {
      return {SequenceViolation::gaps_increasing, i - 1};
    }
  }
  return {};
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os << to_string(v.kind) << " at index " << v.index;
  return os.str();
}

}  // namespace

SequenceValidation validate_sequence(std::span<const double> values, std::string origin_tag) {
  SequenceValidation out;
  if (values.size() < 2) {
    out.report.violation = SequenceViolation::too_short;
    out.report.message = "sequence needs at least two terms";
    return out;
  }
  const Violation v = first_violation(values);
  if (v.kind != SequenceViolation::none) {
    out.report.violation = v.kind;
    out.report.first_violation = v.index;
    out.report.message = describe(v);
    return out;
  }
  out.report.accepted = true;
  out.sequence = SequenceAccess::make(std::vector<double>(values.begin(), values.end()),
                                      std::move(origin_tag));
  return out;
}

SequenceValidation clean_sequence_tail(std::span<const double> values, std::string origin_tag,
                                       std::size_t min_length) {
  const Violation v = first_violation(values);
  std::size_t keep = values.size();
  if (v.kind == SequenceViolation::gaps_increasing) {
    // The offending gap is values[i-1] - values[i] with i = v.index + 1.
    keep = v.index + 1;
  } else if (v.kind != SequenceViolation::none) {
    keep = v.index;
  }
  SequenceValidation out;
  out.report.dropped = values.size() - keep;
  if (keep < std::max<std::size_t>(min_length, 2)) {
    out.report.violation = v.kind == SequenceViolation::none ? SequenceViolation::too_short : v.kind;
    if (v.kind != SequenceViolation::none) out.report.first_violation = v.index;
    std::ostringstream os;
    os << "only " << keep << " valid leading terms (need " << min_length << ")";
    if (v.kind != SequenceViolation::none) os << "; " << describe(v);
    out.report.message = os.str();
    return out;
  }
  out.report.accepted = true;
  if (out.report.dropped > 0) {
    out.report.violation = v.kind;
    out.report.first_violation = v.index;
    out.report.message = "dropped " + std::to_string(out.report.dropped) + " tail terms (" +
                         describe(v) + ")";
  }
  out.sequence = SequenceAccess::make(std::vector<double>(values.begin(), values.begin() + keep),
                                      std::move(origin_tag));
  return out;
}

MonotoneSequence require_sequence(std::span<const double> values, std::string origin_tag) {
  auto result = validate_sequence(values, std::move(origin_tag));
  if (!result.sequence) {
    throw Error(ErrorCode::invalid_sequence, "sequence rejected: " + result.report.message);
  }
  return std::move(*result.sequence);
}

MonotoneSequence power_sequence(double a, std::size_t count, std::size_t offset) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::invalid_argument, "power_sequence: exponent must be positive");
  }
  if (count < 2) throw Error(ErrorCode::invalid_argument, "power_sequence: need at least two terms");
  if (offset < 1) throw Error(ErrorCode::invalid_argument, "power_sequence: offset must be >= 1");
  std::vector<double> values(count);
  for (std::size_t n = 0; n < count; ++n) {
    values[n] = std::pow(static_cast<double>(n + offset), -a);
  }
  std::ostringstream tag;
  tag << "power a=" << a << " N=" << count;
  return require_sequence(values, tag.str());
}

MonotoneSequence geometric_sequence(double ratio, std::size_t count, std::size_t offset) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "geometric_sequence: ratio must lie in (0,1)");
  }
  if (count < 2) throw Error(ErrorCode::invalid_argument, "geometric_sequence: need at least two terms");
  std::vector<double> values(count);
  for (std::size_t n = 0; n < count; ++n) {
    values[n] = std::pow(ratio, static_cast<double>(n + offset));
  }
  auto cleaned = clean_sequence_tail(values, "geometric", 2);
  if (!cleaned.sequence) throw Error(ErrorCode::invalid_sequence, cleaned.report.message);
  return std::move(*cleaned.sequence);
}

double TrajectorySegment::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  return total;
}

TrajectoryBundle TrajectoryBundle::assemble(std::vector<TrajectorySegment> segments,
                                            MonotoneSequence entry, MonotoneSequence exit) {
  constexpr double kEndpointTol = 1e-9;
  if (segments.size() != entry.size()) {
    throw Error(ErrorCode::invalid_argument, "bundle: one segment per entry point required");
  }
  if (exit.size() > segments.size()) {
    throw Error(ErrorCode::invalid_argument, "bundle: exit sequence longer than segment list");
  }
  for (std::size_t n = 0; n < segments.size(); ++n) {
    const auto& seg = segments[n];
    if (seg.points.size() < 2) {
      throw Error(ErrorCode::degenerate, "bundle: segment " + std::to_string(n) + " has no extent");
    }
    for (const auto& p : seg.points) {
      if (!(p.x > 0.0 && p.x <= 1.0 && p.y > 0.0 && p.y <= 1.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "bundle: segment " + std::to_string(n) + " leaves the unit box");
      }
    }
    const Point& s = seg.front();
    if (std::abs(s.x - 1.0) > kEndpointTol || std::abs(s.y - entry[n]) > kEndpointTol) {
      throw Error(ErrorCode::invalid_argument,
                  "bundle: segment " + std::to_string(n) + " does not start at (1, entry[n])");
    }
    const Point& e = seg.back();
    if (std::abs(e.y - 1.0) > kEndpointTol ||
        (n < exit.size() && std::abs(e.x - exit[n]) > kEndpointTol)) {
      throw Error(ErrorCode::invalid_argument,
                  "bundle: segment " + std::to_string(n) + " does not end at (exit[n], 1)");
    }
  }
  return TrajectoryBundle(std::move(segments), std::move(entry), std::move(exit));
}

double TrajectoryBundle::max_chord_tolerance() const {
  double tol = 0.0;
  for (const auto& s : segments_) tol = std::max(tol, s.chord_tolerance);
  return tol;
}

std::size_t TrajectoryBundle::clamped_count() const {
  return static_cast<std::size_t>(
      std::count_if(segments_.begin(), segments_.end(), [](const auto& s) { return s.clamped; }));
}

}  // namespace minkdim
