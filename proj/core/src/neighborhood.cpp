#include "minkdim/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace minkdim {

const char* to_string(MeasureMethod m) {
  switch (m) {
    case MeasureMethod::exact_1d: return "exact-1d";
    case MeasureMethod::brute_1d: return "brute-1d";
    case MeasureMethod::grid_2d: return "grid-2d";
  }
  return "unknown";
}

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::invalid_argument, "delta must be positive and finite");
  }
}

}  // namespace

std::size_t critical_index(const MonotoneSequence& seq, double delta) {
  require_delta(delta);
  const std::size_t n = seq.size();
  if (n < 2) throw Error(ErrorCode::truncation, "critical_index: sequence too short");
  const double twice = 2.0 * delta;
  // Gaps are non-increasing, so "gap < 2 delta" is a monotone predicate.
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (seq.gap(mid) < twice) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == n - 1) {
    throw Error(ErrorCode::truncation,
                "critical_index: no gap below 2*delta within the stored terms; "
                "extend the sequence or raise delta_min");
  }
  if (lo == 0) {
    throw Error(ErrorCode::delta_too_large,
                "critical_index: delta >= gap(0)/2 leaves an empty tail");
  }
  const std::size_t n_delta = lo + 1;
  if (2 * n_delta >= n) {
    std::ostringstream os;
    os << "critical_index: n_delta=" << n_delta << " is not below half the stored length " << n
       << "; extend the sequence or raise delta_min";
    throw Error(ErrorCode::truncation, os.str());
  }
  return n_delta;
}

NeighborhoodMeasurement measure_1d_exact(const MonotoneSequence& seq, double delta) {
  const std::size_t n_delta = critical_index(seq, delta);
  NeighborhoodMeasurement m;
  m.delta = delta;
  m.method = MeasureMethod::exact_1d;
  m.critical_index = n_delta;
  m.measure = seq[n_delta - 1] + 2.0 * delta * static_cast<double>(n_delta);
  return m;
}

NeighborhoodMeasurement measure_1d_bruteforce(std::span<const double> values, double delta) {
  require_delta(delta);
  // The union of balls around {0} and every value: runs of points whose
  // neighbours are at most 2 delta apart merge into one interval of length
  // (last - first) + 2 delta.
  std::vector<double> points(values.begin(), values.end());
  points.push_back(0.0);
  std::sort(points.begin(), points.end());

  double total = 0.0;
  double carry = 0.0;
  auto add = [&](double v) {
    const double t = total + v;
    carry += std::abs(total) >= std::abs(v) ? (total - t) + v : (v - t) + total;
    total = t;
  };
  double first = points.front();
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] - points[i - 1] > 2.0 * delta) {
      add(points[i - 1] - first);
      add(2.0 * delta);
      first = points[i];
    }
  }
  add(points.back() - first);
  add(2.0 * delta);
  total += carry;

  NeighborhoodMeasurement m;
  m.delta = delta;
  m.method = MeasureMethod::brute_1d;
  m.measure = total;
  return m;
}

NeighborhoodMeasurement measure_1d_bruteforce(const MonotoneSequence& seq, double delta) {
  return measure_1d_bruteforce(seq.values(), delta);
}

// ---------------------------------------------------------------------------
// 2D grid measure
// ---------------------------------------------------------------------------

namespace {

struct PieceRef {
  std::uint32_t segment;
  std::uint32_t index;  // piece runs from points[index] to points[index + 1]
};

struct Interval {
  double lo;
  double hi;
  bool operator<(const Interval& o) const { return lo < o.lo; }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solutions x of lo <= coef*x + c <= hi, as [xl, xh]; empty when xl > xh.
Interval solve_linear(double coef, double c, double lo, double hi) {
  if (coef == 0.0) {
    return (c >= lo && c <= hi) ? Interval{-kInf, kInf} : Interval{kInf, -kInf};
  }
  double a = (lo - c) / coef;
  double b = (hi - c) / coef;
  if (a > b) std::swap(a, b);
  return {a, b};
}

// x-extent of {x : dist((x, yc), [A,B]) <= delta}. The stadium is convex, so
// the hull of its three convex pieces (two end disks and the band) is exact.
bool stadium_row(const Point& a, const Point& b, double yc, double delta, double delta_sq,
                 Interval& out) {
  double lo = kInf;
  double hi = -kInf;
  auto disk = [&](const Point& p) {
    const double dy = yc - p.y;
    const double rem = delta_sq - dy * dy;
    if (rem >= 0.0) {
      const double w = std::sqrt(rem);
      lo = std::min(lo, p.x - w);
      hi = std::max(hi, p.x + w);
    }
  };
  disk(a);
  disk(b);

  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  if (len_sq > 0.0) {
    const double len = std::sqrt(len_sq);
    const double ry = yc - a.y;
    // t(x) = ((x - ax) dx + ry dy) / len^2,  s(x) = (-(x - ax) dy + ry dx) / len
    const Interval t = solve_linear(dx / len_sq, (-a.x * dx + ry * dy) / len_sq, 0.0, 1.0);
    const Interval s = solve_linear(-dy / len, (a.x * dy + ry * dx) / len, -delta, delta);
    const double bl = std::max(t.lo, s.lo);
    const double bh = std::min(t.hi, s.hi);
    if (bl <= bh) {
      lo = std::min(lo, bl);
      hi = std::max(hi, bh);
    }
  }
  if (lo > hi) return false;
  out = {lo, hi};
  return true;
}

double chord_deviation(const std::vector<Point>& pts, std::size_t i, std::size_t j) {
  const Point& a = pts[i];
  const Point& b = pts[j];
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  double worst = 0.0;
  for (std::size_t m = i + 1; m < j; ++m) {
    const Point& p = pts[m];
    double t = len_sq > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    worst = std::max(worst, std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy)));
  }
  return worst;
}

// Greedy thinning: from each kept point, the longest chord found by doubling
// then bisection whose skipped points all lie within tol of it.
std::vector<Point> thin_polyline(const std::vector<Point>& pts, double tol) {
  std::vector<Point> out;
  if (pts.empty()) return out;
  const std::size_t last = pts.size() - 1;
  std::size_t i = 0;
  out.push_back(pts[0]);
  while (i < last) {
    std::size_t good = i + 1;
    std::size_t bad = 0;
    for (std::size_t step = 2;; step *= 2) {
      const std::size_t j = std::min(i + step, last);
      if (chord_deviation(pts, i, j) <= tol) {
        good = j;
        if (j == last) break;
      } else {
        bad = j;
        break;
      }
    }
    while (bad != 0 && bad - good > 1) {
      const std::size_t mid = good + (bad - good) / 2;
      if (chord_deviation(pts, i, mid) <= tol) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    out.push_back(pts[good]);
    i = good;
  }
  return out;
}

}  // namespace

NeighborhoodMeasurement measure_2d_grid(std::span<const TrajectorySegment> segments, double delta,
                                        std::uint64_t cell_cap, int cells_per_delta) {
  require_delta(delta);
  if (segments.empty()) throw Error(ErrorCode::invalid_argument, "measure_2d_grid: no segments");
  if (cells_per_delta < 1) {
    throw Error(ErrorCode::invalid_argument, "measure_2d_grid: cells_per_delta must be >= 1");
  }
  if (segments.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::invalid_argument, "measure_2d_grid: too many segments");
  }

  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& pts = segments[s].points;
    if (pts.size() < 2 || !(segments[s].length() > 1e-9)) {
      throw Error(ErrorCode::degenerate,
                  "measure_2d_grid: segment " + std::to_string(s) + " has (near) zero length");
    }
    for (const auto& p : pts) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::invalid_argument, "measure_2d_grid: non-finite point");
      }
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }

  std::vector<std::vector<Point>> lines;
  lines.reserve(segments.size());
  for (const auto& seg : segments) lines.push_back(thin_polyline(seg.points, delta * kThinningFraction));

  const double cell = delta / cells_per_delta;
  const double margin = delta + cell;
  const double gx0 = xmin - margin;
  const double gy0 = ymin - margin;
  const auto cols = static_cast<std::int64_t>(std::ceil((xmax - xmin + 2.0 * margin) / cell));
  const auto rows = static_cast<std::int64_t>(std::ceil((ymax - ymin + 2.0 * margin) / cell));
  const std::int64_t bucket_rows = (rows + cells_per_delta - 1) / cells_per_delta;
  const double bucket = cell * cells_per_delta;

  auto bucket_of_y = [&](double y) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((y - gy0) / bucket)), 0,
                                    bucket_rows - 1);
  };
  auto bucket_of_x = [&](double x) {
    return static_cast<std::int64_t>(std::floor((x - gx0) / bucket));
  };

  // Pieces, and the spatial hash: occupied buckets per bucket row (budget) and
  // per-row candidate lists with each piece dilated by delta in y (counting).
  std::vector<PieceRef> pieces;
  std::vector<std::vector<std::int64_t>> occupied(static_cast<std::size_t>(bucket_rows));
  std::vector<std::uint32_t> row_counts(static_cast<std::size_t>(bucket_rows) + 1, 0);
  for (std::size_t s = 0; s < lines.size(); ++s) {
    const auto& pts = lines[s];
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Point& a = pts[i];
      const Point& b = pts[i + 1];
      if (a == b) continue;
      pieces.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(i)});

      const std::int64_t r0 = bucket_of_y(std::min(a.y, b.y));
      const std::int64_t r1 = bucket_of_y(std::max(a.y, b.y));
      for (std::int64_t r = r0; r <= r1; ++r) {
        // x-range of the piece clipped to this bucket row's slab.
        const double slab_lo = gy0 + static_cast<double>(r) * bucket;
        const double slab_hi = slab_lo + bucket;
        double xa = a.x, xb = b.x;
        if (a.y != b.y) {
          const double t0 = std::clamp((slab_lo - a.y) / (b.y - a.y), 0.0, 1.0);
          const double t1 = std::clamp((slab_hi - a.y) / (b.y - a.y), 0.0, 1.0);
          xa = a.x + t0 * (b.x - a.x);
          xb = a.x + t1 * (b.x - a.x);
        }
        const std::int64_t c0 = bucket_of_x(std::min(xa, xb));
        const std::int64_t c1 = bucket_of_x(std::max(xa, xb));
        auto& occ = occupied[static_cast<std::size_t>(r)];
        for (std::int64_t c = c0; c <= c1; ++c) occ.push_back(c);
      }
      const std::int64_t d0 = bucket_of_y(std::min(a.y, b.y) - delta);
      const std::int64_t d1 = bucket_of_y(std::max(a.y, b.y) + delta);
      for (std::int64_t r = d0; r <= d1; ++r) ++row_counts[static_cast<std::size_t>(r)];
    }
    if (pieces.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorCode::cell_budget, "measure_2d_grid: too many polyline pieces");
    }
  }

  // Candidate buckets: occupied buckets dilated by one in both directions.
  std::uint64_t candidate_buckets = 0;
  {
    for (auto& occ : occupied) {
      std::sort(occ.begin(), occ.end());
      occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
    }
    std::vector<std::int64_t> merged;
    for (std::int64_t r = 0; r < bucket_rows; ++r) {
      merged.clear();
      for (std::int64_t q = std::max<std::int64_t>(0, r - 1);
           q <= std::min(bucket_rows - 1, r + 1); ++q) {
        const auto& occ = occupied[static_cast<std::size_t>(q)];
        merged.insert(merged.end(), occ.begin(), occ.end());
      }
      if (merged.empty()) continue;
      std::sort(merged.begin(), merged.end());
      std::int64_t lo = merged.front() - 1;
      std::int64_t hi = merged.front() + 1;
      for (std::int64_t c : merged) {
        if (c - 1 <= hi + 1) {
          hi = std::max(hi, c + 1);
        } else {
          candidate_buckets += static_cast<std::uint64_t>(hi - lo + 1);
          lo = c - 1;
          hi = c + 1;
        }
      }
      candidate_buckets += static_cast<std::uint64_t>(hi - lo + 1);
    }
    occupied.clear();
    occupied.shrink_to_fit();
  }
  const auto cells_per_bucket = static_cast<std::uint64_t>(cells_per_delta) * cells_per_delta;
  const std::uint64_t candidate_cells = candidate_buckets * cells_per_bucket;
  if (candidate_cells > cell_cap) {
    std::ostringstream os;
    os << "measure_2d_grid: " << candidate_cells << " candidate cells exceed the budget of "
       << cell_cap << " at delta=" << delta << "; raise delta_min or the cell cap";
    throw Error(ErrorCode::cell_budget, os.str());
  }

  // CSR layout of the per-row candidate lists.
  std::vector<std::uint64_t> offsets(static_cast<std::size_t>(bucket_rows) + 1, 0);
  for (std::int64_t r = 0; r < bucket_rows; ++r) {
    offsets[static_cast<std::size_t>(r) + 1] =
        offsets[static_cast<std::size_t>(r)] + row_counts[static_cast<std::size_t>(r)];
  }
  std::vector<std::uint32_t> row_pieces(offsets.back());
  {
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t id = 0; id < pieces.size(); ++id) {
      const auto& pts = lines[pieces[id].segment];
      const Point& a = pts[pieces[id].index];
      const Point& b = pts[pieces[id].index + 1];
      const std::int64_t d0 = bucket_of_y(std::min(a.y, b.y) - delta);
      const std::int64_t d1 = bucket_of_y(std::max(a.y, b.y) + delta);
      for (std::int64_t r = d0; r <= d1; ++r) row_pieces[cursor[static_cast<std::size_t>(r)]++] = id;
    }
  }

  const double delta_sq = delta * delta;
  std::uint64_t covered = 0;
  std::vector<Interval> spans;
  for (std::int64_t j = 0; j < rows; ++j) {
    const double yc = gy0 + (static_cast<double>(j) + 0.5) * cell;
    const auto r = static_cast<std::size_t>(j / cells_per_delta);
    spans.clear();
    for (std::uint64_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const PieceRef ref = pieces[row_pieces[k]];
      const auto& pts = lines[ref.segment];
      const Point& a = pts[ref.index];
      const Point& b = pts[ref.index + 1];
      if (std::min(a.y, b.y) - delta > yc || std::max(a.y, b.y) + delta < yc) continue;
      Interval iv;
      if (stadium_row(a, b, yc, delta, delta_sq, iv)) spans.push_back(iv);
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());

    auto count_centers = [&](double lo, double hi) -> std::uint64_t {
      auto first = static_cast<std::int64_t>(std::ceil((lo - gx0) / cell - 0.5));
      auto last = static_cast<std::int64_t>(std::floor((hi - gx0) / cell - 0.5));
      first = std::max<std::int64_t>(first, 0);
      last = std::min<std::int64_t>(last, cols - 1);
      return last >= first ? static_cast<std::uint64_t>(last - first + 1) : 0;
    };
    double lo = spans.front().lo;
    double hi = spans.front().hi;
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].lo <= hi) {
        hi = std::max(hi, spans[i].hi);
      } else {
        covered += count_centers(lo, hi);
        lo = spans[i].lo;
        hi = spans[i].hi;
      }
    }
    covered += count_centers(lo, hi);
  }

  NeighborhoodMeasurement m;
  m.delta = delta;
  m.method = MeasureMethod::grid_2d;
  m.cell_side = cell;
  m.cell_count = covered;
  m.candidate_cells = candidate_cells;
  m.measure = static_cast<double>(covered) * cell * cell;
  return m;
}

}  // namespace minkdim
