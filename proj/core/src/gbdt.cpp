#include "actorlens/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "random.hpp"

namespace actorlens {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct TreeBuilder {
  const std::vector<std::vector<double>>& rows;
  const std::vector<double>& grad;
  const std::vector<double>& hess;
  const GbdtParams& params;
  std::size_t n_features;
  Gbdt::Tree tree;

  double leaf_value(double g, double h) const { return -g / (h + params.lambda); }
  double score(double g, double h) const { return g * g / (h + params.lambda); }

  std::int32_t build(std::vector<std::size_t> idx, std::size_t depth) {
    double g = 0.0;
    double h = 0.0;
    for (auto i : idx) {
      g += grad[i];
      h += hess[i];
    }
    const auto node_id = static_cast<std::int32_t>(tree.size());
    tree.push_back({});
    tree[static_cast<std::size_t>(node_id)].value = leaf_value(g, h);
    if (depth >= params.max_depth || idx.size() < 2) return node_id;

    double best_gain = params.min_split_gain;
    std::int32_t best_feature = -1;
    double best_threshold = 0.0;
    const double parent = score(g, h);
    std::vector<std::size_t> order = idx;
    for (std::size_t f = 0; f < n_features; ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return rows[a][f] < rows[b][f]; });
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        gl += grad[order[k]];
        hl += hess[order[k]];
        const double here = rows[order[k]][f];
        const double next = rows[order[k + 1]][f];
        if (!(here < next)) continue;
        const double hr = h - hl;
        if (hl < params.min_child_weight || hr < params.min_child_weight) continue;
        const double gain = 0.5 * (score(gl, hl) + score(g - gl, hr) - parent);
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<std::int32_t>(f);
          best_threshold = here + (next - here) / 2.0;
        }
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : idx) {
      (rows[i][static_cast<std::size_t>(best_feature)] < best_threshold ? left : right).push_back(i);
    }
    const std::int32_t l = build(std::move(left), depth + 1);
    const std::int32_t r = build(std::move(right), depth + 1);
    auto& node = tree[static_cast<std::size_t>(node_id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return node_id;
  }
};

double eval_tree(const Gbdt::Tree& tree, std::span<const double> row) {
  std::size_t i = 0;
  while (tree[i].feature >= 0) {
    const auto& n = tree[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
  }
  return tree[i].value;
}

}  // namespace

Gbdt Gbdt::fit(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
               const std::vector<double>& weights, const GbdtParams& params) {
  const std::size_t n = rows.size();
  if (n == 0 || labels.size() != n || (!weights.empty() && weights.size() != n)) {
    throw std::invalid_argument("gbdt: rows, labels and weights must have matching non-zero length");
  }
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("gbdt: ragged rows");
  }
  std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0) : weights;

  Gbdt model;
  model.learning_rate_ = params.learning_rate;
  double wsum = 0.0;
  double wpos = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wsum += w[i];
    if (labels[i] == 1) wpos += w[i];
  }
  const double prior = std::clamp(wpos / wsum, 1e-6, 1.0 - 1e-6);
  model.base_margin_ = std::log(prior / (1.0 - prior));

  std::vector<double> margin(n, model.base_margin_);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  detail::Rng rng(params.seed);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = w[i] * (p - static_cast<double>(labels[i]));
      hess[i] = w[i] * std::max(p * (1.0 - p), 1e-16);
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (params.subsample >= 1.0 || rng.chance(params.subsample)) idx.push_back(i);
    }
    if (idx.empty()) continue;
    TreeBuilder b{rows, grad, hess, params, d, {}};
    b.build(std::move(idx), 0);
    for (auto& node : b.tree) node.value *= params.learning_rate;
    for (std::size_t i = 0; i < n; ++i) margin[i] += eval_tree(b.tree, rows[i]);
    model.trees_.push_back(std::move(b.tree));
  }
  return model;
}

double Gbdt::margin(std::span<const double> row) const {
  double m = base_margin_;
  for (const auto& t : trees_) m += eval_tree(t, row);
  return m;
}

double Gbdt::probability(std::span<const double> row) const { return sigmoid(margin(row)); }

}  // namespace actorlens
