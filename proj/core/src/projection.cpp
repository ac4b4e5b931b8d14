#include "actorlens/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "actorlens/error.hpp"
#include "actorlens/umap.hpp"

namespace actorlens {

void ProjectionConfig::validate() const {
  if (n_neighbors < 2) throw Error(ErrorCode::invariant_violation, "n_neighbors", "n_neighbors must be >= 2");
  if (!(glyph_separation > 0.0) || !std::isfinite(glyph_separation)) {
    throw Error(ErrorCode::invariant_violation, "glyph_separation", "glyph_separation must be > 0");
  }
}

Normalized normalize(std::span<const MetricArray> vectors) {
  Normalized out;
  if (vectors.empty()) return out;
  out.record.min = vectors.front();
  out.record.max = vectors.front();
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      out.record.min[i] = std::min(out.record.min[i], v[i]);
      out.record.max[i] = std::max(out.record.max[i], v[i]);
    }
  }
  out.vectors.reserve(vectors.size());
  for (const auto& v : vectors) {
    MetricArray n{};
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      const double span = out.record.max[i] - out.record.min[i];
      n[i] = span > 0.0 ? (v[i] - out.record.min[i]) / span : 0.0;
    }
    out.vectors.push_back(n);
  }
  return out;
}

Normalized normalize(std::span<const MetricVector> vectors) {
  std::vector<MetricArray> raw;
  raw.reserve(vectors.size());
  for (const auto& v : vectors) raw.push_back(v.as_array());
  return normalize(std::span<const MetricArray>(raw));
}

double metric_distance(const MetricArray& u, const MetricArray& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < kMetricCount; ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return s;
}

namespace {

class Grid {
 public:
  explicit Grid(double cell) : cell_(cell) {}

  bool clear(Point p, double separation) const {
    const auto cx = cell_of(p.x);
    const auto cy = cell_of(p.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (const Point& q : it->second) {
          if (distance(p, q) < separation) return false;
        }
      }
    }
    return true;
  }

  void add(Point p) { cells_[key(cell_of(p.x), cell_of(p.y))].push_back(p); }

 private:
  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xFFFFFFFFull);
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Point>> cells_;
};

}  // namespace

std::vector<Point> separate_points(std::span<const Point> points, double separation, std::size_t max_iterations) {
  std::vector<Point> placed;
  placed.reserve(points.size());
  Grid grid(separation);
  constexpr double kGoldenAngle = 2.399963229728653;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point origin = points[i];
    Point p = origin;
    bool ok = grid.clear(p, separation);
    // Arm spacing = separation, roughly separation/2 of arc between steps.
    for (std::size_t s = 1; !ok && s <= max_iterations; ++s) {
      const double theta = std::sqrt(2.0 * std::numbers::pi * static_cast<double>(s));
      const double r = separation * theta / (2.0 * std::numbers::pi);
      p = {origin.x + r * std::cos(theta), origin.y + r * std::sin(theta)};
      ok = grid.clear(p, separation);
    }
    if (!ok) {
      double reach = 0.0;
      for (const Point& q : placed) reach = std::max(reach, distance(q, origin));
      const double phi = kGoldenAngle * static_cast<double>(i);
      // Nudge outward until the rounded coordinates are clear.
      for (double r = reach + separation; !ok; r += separation * 0.25) {
        p = {origin.x + r * std::cos(phi), origin.y + r * std::sin(phi)};
        ok = grid.clear(p, separation);
      }
    }
    grid.add(p);
    placed.push_back(p);
  }
  return placed;
}

Embedding embed(std::span<const MetricArray> vectors, const ProjectionConfig& cfg) {
  cfg.validate();
  if (vectors.size() < 2) {
    throw Error(ErrorCode::too_few_points, "members", "projection needs at least 2 members, got " +
                                                          std::to_string(vectors.size()));
  }
  Normalized norm = normalize(vectors);
  const std::size_t n = norm.vectors.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = metric_distance(norm.vectors[i], norm.vectors[j]);
  }
  UmapParams params;
  params.n_neighbors = cfg.n_neighbors;
  params.seed = cfg.seed;
  std::vector<Point> raw = umap_embed(d, params);

  // Fit into a square whose side grows with sqrt(n) glyphs.
  double min_x = raw.front().x;
  double max_x = min_x;
  double min_y = raw.front().y;
  double max_y = min_y;
  for (const auto& p : raw) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double extent = std::max(max_x - min_x, max_y - min_y);
  const double side = 2.0 * cfg.glyph_separation * std::sqrt(static_cast<double>(n));
  const double scale = extent > 0.0 ? side / extent : 0.0;
  for (auto& p : raw) p = {(p.x - min_x) * scale, (p.y - min_y) * scale};

  Embedding out;
  out.coordinates = separate_points(raw, cfg.glyph_separation, cfg.max_displacement_iterations);
  out.normalization = norm.record;
  return out;
}

Embedding embed(std::span<const MetricVector> vectors, const ProjectionConfig& cfg) {
  std::vector<MetricArray> raw;
  raw.reserve(vectors.size());
  for (const auto& v : vectors) raw.push_back(v.as_array());
  return embed(std::span<const MetricArray>(raw), cfg);
}

}  // namespace actorlens
