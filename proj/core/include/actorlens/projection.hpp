#pragma once

// Glyph layout for the projection view: min-max normalised metric vectors,
// a squared-difference dissimilarity, a 2D manifold embedding and a greedy
// collision-avoidance pass.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "actorlens/metrics.hpp"
#include "actorlens/telemetry.hpp"

namespace actorlens {

struct ProjectionConfig {
  std::uint64_t seed = 0;
  std::size_t n_neighbors = 15;
  double glyph_separation = 1.0;
  std::size_t max_displacement_iterations = 200;

  // Throws Error(invariant_violation).
  void validate() const;
};

using MetricArray = std::array<double, kMetricCount>;

struct NormalizationRecord {
  MetricArray min{};
  MetricArray max{};
};

struct Normalized {
  std::vector<MetricArray> vectors;
  NormalizationRecord record;
};

// Per-metric min-max over the set; constant metrics map to 0.
Normalized normalize(std::span<const MetricArray> vectors);
Normalized normalize(std::span<const MetricVector> vectors);

// Sum of squared component differences.
double metric_distance(const MetricArray& u, const MetricArray& v);

struct Embedding {
  std::vector<Point> coordinates;
  NormalizationRecord normalization;
};

// Input order is the collision-avoidance insertion order. Throws
// Error(too_few_points) for fewer than two vectors.
Embedding embed(std::span<const MetricVector> vectors, const ProjectionConfig& cfg = {});
Embedding embed(std::span<const MetricArray> vectors, const ProjectionConfig& cfg = {});

// Greedy pass in input order: a point closer than `separation` to any placed
// point walks an Archimedean spiral around its original position, then falls
// back to a radial jump past every placed point.
std::vector<Point> separate_points(std::span<const Point> points, double separation,
                                   std::size_t max_iterations);

}  // namespace actorlens
