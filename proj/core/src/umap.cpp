#include "actorlens/umap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "random.hpp"

namespace actorlens {

namespace {

struct Edge {
  std::size_t head;
  std::size_t tail;
  double weight;
};

// Fuzzy simplicial set: smooth-kNN memberships, symmetrised by fuzzy union.
std::vector<Edge> fuzzy_graph(const std::vector<std::vector<double>>& d, std::size_t k) {
  const std::size_t n = d.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  const double target = std::log2(static_cast<double>(k));
  double mean_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mean_d += d[i][j];
  }
  mean_d /= static_cast<double>(n * n);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[i][a] < d[i][b]; });
    order.resize(k);

    double rho = 0.0;
    for (auto j : order) {
      if (d[i][j] > 0.0) {
        rho = d[i][j];
        break;
      }
    }
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double sigma = 1.0;
    for (int it = 0; it < 64; ++it) {
      double psum = 0.0;
      for (auto j : order) psum += std::exp(-std::max(0.0, d[i][j] - rho) / sigma);
      if (std::fabs(psum - target) < 1e-5) break;
      if (psum > target) {
        hi = sigma;
        sigma = (lo + hi) / 2.0;
      } else {
        lo = sigma;
        sigma = std::isinf(hi) ? sigma * 2.0 : (lo + hi) / 2.0;
      }
    }
    sigma = std::max(sigma, 1e-3 * mean_d);
    if (sigma <= 0.0) sigma = 1e-3;
    for (auto j : order) w[i][j] = std::exp(-std::max(0.0, d[i][j] - rho) / sigma);
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double s = w[i][j] + w[j][i] - w[i][j] * w[j][i];
      if (s > 0.0) edges.push_back({i, j, s});
    }
  }
  return edges;
}

// Top two axes of classical MDS, treating entries as squared distances.
std::vector<Point> mds_init(const std::vector<std::vector<double>>& d, detail::Rng& rng) {
  const std::size_t n = d.size();
  std::vector<double> row_mean(n, 0.0);
  double all = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += d[i][j];
    all += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  all /= static_cast<double>(n * n);
  std::vector<std::vector<double>> bmat(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) bmat[i][j] = -0.5 * (d[i][j] - row_mean[i] - row_mean[j] + all);
  }

  std::vector<std::vector<double>> axes;
  std::vector<double> values;
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>((i * 7919 + axis * 104729) % 101);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const double dot = std::inner_product(v.begin(), v.end(), axes[a].begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * axes[a][i];
      }
      std::vector<double> next(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) next[i] += bmat[i][j] * v[j];
      }
      const double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
      if (norm < 1e-12) {
        std::fill(next.begin(), next.end(), 0.0);
        v = next;
        lambda = 0.0;
        break;
      }
      for (auto& x : next) x /= norm;
      lambda = norm;
      v = std::move(next);
    }
    axes.push_back(v);
    values.push_back(lambda);
  }

  std::vector<Point> y(n);
  double extent = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = {axes[0][i] * std::sqrt(std::max(values[0], 0.0)), axes[1][i] * std::sqrt(std::max(values[1], 0.0))};
    extent = std::max({extent, std::fabs(y[i].x), std::fabs(y[i].y)});
  }
  const double scale = extent > 0.0 ? 10.0 / extent : 0.0;
  for (auto& p : y) {
    p.x = p.x * scale + 1e-4 * rng.normal();
    p.y = p.y * scale + 1e-4 * rng.normal();
  }
  return y;
}

double clip(double v) { return std::clamp(v, -4.0, 4.0); }

}  // namespace

std::vector<Point> umap_embed(const std::vector<std::vector<double>>& d, const UmapParams& params) {
  const std::size_t n = d.size();
  if (n < 2) throw std::invalid_argument("umap: need at least two points");
  for (const auto& row : d) {
    if (row.size() != n) throw std::invalid_argument("umap: dissimilarity must be square");
  }
  const std::size_t k = std::clamp<std::size_t>(params.n_neighbors, 1, n - 1);
  detail::Rng rng(params.seed);
  std::vector<Point> y = mds_init(d, rng);
  if (n == 2) return y;

  const std::vector<Edge> edges = fuzzy_graph(d, k);
  double w_max = 0.0;
  for (const auto& e : edges) w_max = std::max(w_max, e.weight);
  std::vector<double> per_sample(edges.size());
  std::vector<double> next_sample(edges.size());
  std::vector<double> per_negative(edges.size());
  std::vector<double> next_negative(edges.size());
  const auto neg_rate = static_cast<double>(params.negative_sample_rate);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    per_sample[e] = w_max / edges[e].weight;
    next_sample[e] = per_sample[e];
    per_negative[e] = per_sample[e] / neg_rate;
    next_negative[e] = per_negative[e];
  }

  const double a = params.a;
  const double b = params.b;
  const auto epochs = static_cast<double>(params.n_epochs);
  for (std::size_t epoch = 1; epoch <= params.n_epochs; ++epoch) {
    const double alpha = params.learning_rate * (1.0 - static_cast<double>(epoch - 1) / epochs);
    const double now = static_cast<double>(epoch);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (next_sample[e] > now) continue;
      Point& yi = y[edges[e].head];
      Point& yj = y[edges[e].tail];
      const double dx = yi.x - yj.x;
      const double dy = yi.y - yj.y;
      const double dsq = dx * dx + dy * dy;
      if (dsq > 0.0) {
        const double coef = -2.0 * a * b * std::pow(dsq, b - 1.0) / (a * std::pow(dsq, b) + 1.0);
        const double gx = clip(coef * dx) * alpha;
        const double gy = clip(coef * dy) * alpha;
        yi.x += gx;
        yi.y += gy;
        yj.x -= gx;
        yj.y -= gy;
      }
      next_sample[e] += per_sample[e];

      const auto n_neg = static_cast<std::size_t>((now - next_negative[e]) / per_negative[e]);
      for (std::size_t s = 0; s < n_neg; ++s) {
        const auto kk = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        if (kk == edges[e].head) continue;
        const Point& yk = y[kk];
        const double ndx = yi.x - yk.x;
        const double ndy = yi.y - yk.y;
        const double ndsq = ndx * ndx + ndy * ndy;
        double gx = 4.0;
        double gy = 4.0;
        if (ndsq > 0.0) {
          const double coef = 2.0 * b / ((0.001 + ndsq) * (a * std::pow(ndsq, b) + 1.0));
          gx = clip(coef * ndx);
          gy = clip(coef * ndy);
        }
        yi.x += gx * alpha;
        yi.y += gy * alpha;
      }
      next_negative[e] += static_cast<double>(n_neg) * per_negative[e];
    }
  }
  return y;
}

}  // namespace actorlens
