#include "minkdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace minkdim {

DeltaLadder make_ladder(double delta_min, double delta_max, std::size_t count) {
  if (!(delta_min > 0.0) || !(delta_max > delta_min) || !std::isfinite(delta_max)) {
    throw Error(ErrorCode::invalid_argument, "make_ladder: need 0 < delta_min < delta_max");
  }
  if (count < 2) throw Error(ErrorCode::invalid_argument, "make_ladder: need at least two points");
  const double log_max = std::log(delta_max);
  const double log_min = std::log(delta_min);
  const double steps = static_cast<double>(count - 1);
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::exp(log_max + (log_min - log_max) * static_cast<double>(i) / steps);
  }
  values.front() = delta_max;
  values.back() = delta_min;
  return DeltaLadder(std::move(values), std::exp((log_min - log_max) / steps));
}

DeltaLadder default_ladder_1d() { return make_ladder(1e-6, 1e-2, 24); }

DeltaLadder default_ladder_2d() { return make_ladder(1e-3, std::pow(10.0, -1.5), 12); }

double pointwise_dimension(const NeighborhoodMeasurement& sample, int ambient) {
  return static_cast<double>(ambient) - std::log(sample.measure) / std::log(sample.delta);
}

DimensionEstimate estimate_dimension(std::span<const NeighborhoodMeasurement> samples,
                                     int ambient) {
  if (ambient != 1 && ambient != 2) {
    throw Error(ErrorCode::invalid_argument, "estimate_dimension: ambient must be 1 or 2");
  }
  if (samples.size() < kMinLadderSamples) {
    std::ostringstream os;
    os << "estimate_dimension: " << samples.size() << " samples, need at least "
       << kMinLadderSamples;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  std::vector<NeighborhoodMeasurement> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.delta > b.delta; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = sorted[i];
    if (!(s.measure > 0.0) || !std::isfinite(s.measure)) {
      throw Error(ErrorCode::invalid_argument, "estimate_dimension: non-positive measure");
    }
    if (!(s.delta > 0.0 && s.delta < 1.0)) {
      throw Error(ErrorCode::invalid_argument, "estimate_dimension: delta must lie in (0,1)");
    }
    if (i > 0 && sorted[i - 1].delta == s.delta) {
      throw Error(ErrorCode::invalid_argument, "estimate_dimension: duplicate delta");
    }
  }

  const auto n = static_cast<double>(sorted.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& s : sorted) {
    mean_x += std::log(s.delta);
    mean_y += std::log(s.measure);
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& s : sorted) {
    const double dx = std::log(s.delta) - mean_x;
    const double dy = std::log(s.measure) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double ss_res = std::max(0.0, syy - slope * sxy);

  DimensionEstimate est;
  est.ambient_dim = ambient;
  est.fit = static_cast<double>(ambient) - slope;
  est.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  est.window = {sorted.back().delta, sorted.front().delta};

  // limsup/liminf proxies from the small-delta half.
  est.upper = est.fit;
  est.lower = est.fit;
  for (std::size_t i = sorted.size() / 2; i < sorted.size(); ++i) {
    const double p = pointwise_dimension(sorted[i], ambient);
    est.upper = std::max(est.upper, p);
    est.lower = std::min(est.lower, p);
  }
  return est;
}

std::vector<NeighborhoodMeasurement> sample_sequence(const MonotoneSequence& seq,
                                                     const DeltaLadder& ladder) {
  if (seq.size() < kMinAsymptoticLength) {
    throw Error(ErrorCode::truncation, "sequence_dimension: need at least 16 terms");
  }
  std::vector<NeighborhoodMeasurement> out;
  out.reserve(ladder.size());
  for (double delta : ladder.values()) out.push_back(measure_1d_exact(seq, delta));
  return out;
}

DimensionEstimate sequence_dimension(const MonotoneSequence& seq, const DeltaLadder& ladder) {
  const auto samples = sample_sequence(seq, ladder);
  return estimate_dimension(samples, 1);
}

std::vector<NeighborhoodMeasurement> sample_segments(std::span<const TrajectorySegment> segments,
                                                     const DeltaLadder& ladder,
                                                     std::uint64_t cell_cap) {
  const double limit = ladder.delta_min() / 32.0;
  for (const auto& s : segments) {
    if (!(s.chord_tolerance > 0.0) || s.chord_tolerance > limit * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "segment " << s.source_index << " sampled with chord tolerance " << s.chord_tolerance
         << " above delta_min/32 = " << limit;
      throw Error(ErrorCode::sampling_too_coarse, os.str());
    }
  }
  std::vector<NeighborhoodMeasurement> out;
  out.reserve(ladder.size());
  for (double delta : ladder.values()) out.push_back(measure_2d_grid(segments, delta, cell_cap));
  return out;
}

std::vector<NeighborhoodMeasurement> sample_bundle(const TrajectoryBundle& bundle,
                                                   const DeltaLadder& ladder,
                                                   std::uint64_t cell_cap) {
  return sample_segments(bundle.segments(), ladder, cell_cap);
}

DimensionEstimate bundle_dimension(const TrajectoryBundle& bundle, const DeltaLadder& ladder,
                                   std::uint64_t cell_cap) {
  const auto samples = sample_bundle(bundle, ladder, cell_cap);
  return estimate_dimension(samples, 2);
}

DimensionEstimate curve_dimension(const TrajectorySegment& curve, const DeltaLadder& ladder,
                                  std::uint64_t cell_cap) {
  const auto samples = sample_segments(std::span(&curve, 1), ladder, cell_cap);
  return estimate_dimension(samples, 2);
}

}  // namespace minkdim
