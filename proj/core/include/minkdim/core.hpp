#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minkdim/error.hpp"

namespace minkdim {

/// Number of terms below which a sequence carries too little asymptotic
/// signal for dimension estimation.
inline constexpr std::size_t kMinAsymptoticLength = 16;

/// Minimum number of ladder samples accepted by the regression.
inline constexpr std::size_t kMinLadderSamples = 8;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Strictly decreasing positive sequence with non-increasing gaps.
///
/// Index 0 holds the first term y_1 of the orbit. Instances are immutable;
/// the only way to obtain one is through validation.
class MonotoneSequence {
 public:
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  /// values[i] - values[i + 1]
  double gap(std::size_t i) const { return values_[i] - values_[i + 1]; }

  const std::string& origin_tag() const { return origin_tag_; }

 private:
  friend struct SequenceAccess;
  MonotoneSequence(std::vector<double> values, std::string origin_tag)
      : values_(std::move(values)), origin_tag_(std::move(origin_tag)) {}

  std::vector<double> values_;
  std::string origin_tag_;
};

enum class SequenceViolation {
  none,
  too_short,
  non_positive,
  non_monotone,
  gaps_increasing,
};

const char* to_string(SequenceViolation v);

struct SequenceReport {
  bool accepted = false;
  SequenceViolation violation = SequenceViolation::none;
  std::optional<std::size_t> first_violation;
  /// Tail terms removed by clean_sequence_tail.
  std::size_t dropped = 0;
  std::string message;
};

struct SequenceValidation {
  std::optional<MonotoneSequence> sequence;
  SequenceReport report;
};

/// Checks every MonotoneSequence invariant; on failure the report names the
/// first offending index (the element for order/positivity, the later gap
/// for gap growth).
SequenceValidation validate_sequence(std::span<const double> values,
                                     std::string origin_tag = {});

/// Keeps the longest valid prefix. Used for numerically generated orbits
/// and exit sequences whose far tail can lose gap monotonicity to rounding.
SequenceValidation clean_sequence_tail(std::span<const double> values,
                                       std::string origin_tag = {},
                                       std::size_t min_length = kMinAsymptoticLength);

/// Throws Error(invalid_sequence) with the report message on rejection.
MonotoneSequence require_sequence(std::span<const double> values,
                                  std::string origin_tag = {});

/// values[n] = (n + offset)^(-a), n = 0..count-1.
MonotoneSequence power_sequence(double a, std::size_t count, std::size_t offset = 1);

/// values[n] = ratio^(n + offset).
MonotoneSequence geometric_sequence(double ratio, std::size_t count, std::size_t offset = 1);

class DeltaLadder {
 public:
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double delta_max() const { return values_.front(); }
  double delta_min() const { return values_.back(); }
  double ratio() const { return ratio_; }

 private:
  friend DeltaLadder make_ladder(double delta_min, double delta_max, std::size_t count);
  DeltaLadder(std::vector<double> values, double ratio)
      : values_(std::move(values)), ratio_(ratio) {}

  std::vector<double> values_;
  double ratio_ = 1.0;
};

struct DeltaWindow {
  double delta_min = 0.0;
  double delta_max = 0.0;
};

struct DimensionEstimate {
  double fit = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double r_squared = 0.0;
  DeltaWindow window;
  int ambient_dim = 1;

  /// Upper and lower proxies disagree by more than 0.1: the window does not
  /// resolve a limit.
  bool unconverged() const { return upper - lower > 0.1; }
};

struct TrajectorySegment {
  std::vector<Point> points;
  /// Index of the entry point this segment was generated from.
  std::size_t source_index = 0;
  /// Chord-error bound the polyline was sampled with.
  double chord_tolerance = 0.0;
  /// Exit coordinate underflowed and was clamped to the smallest normal.
  bool clamped = false;
  /// Start already on the exit transversal; the segment is a single point.
  bool degenerate = false;

  const Point& front() const { return points.front(); }
  const Point& back() const { return points.back(); }
  double length() const;
};

/// Family of segments from the entry transversal {x = 1} to the exit
/// transversal {y = 1}.
class TrajectoryBundle {
 public:
  /// Checks that segments[n] runs from (1, entry[n]) to (exit[n], 1) for
  /// every n < exit.size() and that every point lies in (0,1] x (0,1].
  static TrajectoryBundle assemble(std::vector<TrajectorySegment> segments,
                                   MonotoneSequence entry, MonotoneSequence exit);

  std::span<const TrajectorySegment> segments() const { return segments_; }
  const MonotoneSequence& entry() const { return entry_; }
  const MonotoneSequence& exit() const { return exit_; }
  double max_chord_tolerance() const;
  std::size_t clamped_count() const;

 private:
  TrajectoryBundle(std::vector<TrajectorySegment> segments, MonotoneSequence entry,
                   MonotoneSequence exit)
      : segments_(std::move(segments)), entry_(std::move(entry)), exit_(std::move(exit)) {}

  std::vector<TrajectorySegment> segments_;
  MonotoneSequence entry_;
  MonotoneSequence exit_;
};

}  // namespace minkdim
