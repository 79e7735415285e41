#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "minkdim/core.hpp"
#include "minkdim/neighborhood.hpp"

namespace minkdim {

/// Geometric ladder from delta_max down to delta_min.
DeltaLadder make_ladder(double delta_min, double delta_max, std::size_t count);

/// Ladders used by the acceptance scenarios.
DeltaLadder default_ladder_1d();  // 24 points over [1e-6, 1e-2]
DeltaLadder default_ladder_2d();  // 12 points over [1e-3, 10^-1.5]

/// Least-squares dimension from (delta, measure) samples.
///
/// fit = ambient - slope of ln(measure) against ln(delta). upper/lower bracket
/// the pointwise values ambient - ln(measure)/ln(delta) over the smaller-delta
/// half of the samples, widened to contain fit.
DimensionEstimate estimate_dimension(std::span<const NeighborhoodMeasurement> samples,
                                     int ambient);

/// Pointwise value ambient - ln(measure)/ln(delta) for one sample.
double pointwise_dimension(const NeighborhoodMeasurement& sample, int ambient);

std::vector<NeighborhoodMeasurement> sample_sequence(const MonotoneSequence& seq,
                                                     const DeltaLadder& ladder);

DimensionEstimate sequence_dimension(const MonotoneSequence& seq, const DeltaLadder& ladder);

/// Grid samples over the ladder. Throws sampling_too_coarse when any segment
/// was sampled with chord tolerance above delta_min/32.
std::vector<NeighborhoodMeasurement> sample_segments(std::span<const TrajectorySegment> segments,
                                                     const DeltaLadder& ladder,
                                                     std::uint64_t cell_cap = kDefaultCellCap);

std::vector<NeighborhoodMeasurement> sample_bundle(const TrajectoryBundle& bundle,
                                                   const DeltaLadder& ladder,
                                                   std::uint64_t cell_cap = kDefaultCellCap);

DimensionEstimate bundle_dimension(const TrajectoryBundle& bundle, const DeltaLadder& ladder,
                                   std::uint64_t cell_cap = kDefaultCellCap);

/// Dimension of a single planar curve (spirals).
DimensionEstimate curve_dimension(const TrajectorySegment& curve, const DeltaLadder& ladder,
                                  std::uint64_t cell_cap = kDefaultCellCap);

}  // namespace minkdim
