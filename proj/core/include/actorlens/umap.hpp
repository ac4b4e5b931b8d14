#pragma once

// Uniform manifold approximation and projection to 2D over a precomputed
// dissimilarity matrix. Exact k-nearest neighbours, classical-MDS
// initialisation and seeded stochastic layout optimisation.

#include <cstdint>
#include <vector>

#include "actorlens/telemetry.hpp"

namespace actorlens {

struct UmapParams {
  std::size_t n_neighbors = 15;
  std::size_t n_epochs = 200;
  std::size_t negative_sample_rate = 5;
  double learning_rate = 1.0;
  // Curve parameters for min_dist = 0.1, spread = 1.
  double a = 1.577;
  double b = 0.895;
  std::uint64_t seed = 0;
};

// dissimilarity: symmetric n x n with a zero diagonal, n >= 2.
std::vector<Point> umap_embed(const std::vector<std::vector<double>>& dissimilarity, const UmapParams& params);

}  // namespace actorlens
