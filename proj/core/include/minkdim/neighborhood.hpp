#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "minkdim/core.hpp"

namespace minkdim {

enum class MeasureMethod { exact_1d, brute_1d, grid_2d };

const char* to_string(MeasureMethod m);

/// Lebesgue measure of a delta-neighborhood together with the quantities
/// that produced it.
struct NeighborhoodMeasurement {
  double delta = 0.0;
  double measure = 0.0;
  MeasureMethod method = MeasureMethod::exact_1d;

  // exact-1d
  std::size_t critical_index = 0;

  // grid-2d
  std::uint64_t cell_count = 0;
  double cell_side = 0.0;
  std::uint64_t candidate_cells = 0;
};

/// Default 2D grid budget (cells in the sparse candidate region).
inline constexpr std::uint64_t kDefaultCellCap = 64'000'000;

/// Grid cells per delta along each axis.
inline constexpr int kCellsPerDelta = 8;

/// Polylines are thinned before counting, keeping every dropped vertex within
/// this fraction of delta of the chord that replaces it.
inline constexpr double kThinningFraction = 1.0 / 128.0;

/// 1-based index n_delta of the first gap y_n - y_{n+1} below 2*delta.
///
/// Throws delta_too_large when the very first gap is already below 2*delta
/// (empty tail) and truncation when n_delta reaches half the stored length.
std::size_t critical_index(const MonotoneSequence& seq, double delta);

/// Nucleus/tail measure y_{n_delta} + 2*delta*n_delta.
NeighborhoodMeasurement measure_1d_exact(const MonotoneSequence& seq, double delta);

/// Length of the merged union of (y_n - delta, y_n + delta) together with the
/// limit point interval (-delta, delta).
NeighborhoodMeasurement measure_1d_bruteforce(std::span<const double> values, double delta);
NeighborhoodMeasurement measure_1d_bruteforce(const MonotoneSequence& seq, double delta);

/// Area of the delta-neighborhood of a family of polylines on a grid of side
/// delta/8: counts cells whose centers lie within delta of some polyline.
///
/// The grid covers the bounding box inflated by delta plus one cell. Only
/// buckets of side delta within one bucket of the geometry are candidates;
/// their cell total must stay within cell_cap. Polylines are thinned to
/// delta * kThinningFraction first.
///
/// cells_per_delta other than 8 exists for grid-convergence studies.
NeighborhoodMeasurement measure_2d_grid(std::span<const TrajectorySegment> segments,
                                        double delta,
                                        std::uint64_t cell_cap = kDefaultCellCap,
                                        int cells_per_delta = kCellsPerDelta);

}  // namespace minkdim
