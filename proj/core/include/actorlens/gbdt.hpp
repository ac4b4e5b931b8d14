#pragma once

// Second-order gradient-boosted regression trees with logistic loss for
// binary classification (exact greedy split search).

#include <cstdint>
#include <span>
#include <vector>

namespace actorlens {

struct GbdtParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 4;
  double learning_rate = 0.1;
  double lambda = 1.0;            // L2 on leaf weights
  double min_child_weight = 0.1;  // minimum hessian sum per child
  double min_split_gain = 0.0;
  double subsample = 1.0;  // row fraction per tree, drawn from seed
  std::uint64_t seed = 0;
};

class Gbdt {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 for leaves
    double threshold = 0.0;     // x[feature] < threshold goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  // rows: n x d, labels in {0, 1}, weights > 0 (empty means all 1).
  static Gbdt fit(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                  const std::vector<double>& weights, const GbdtParams& params);

  double margin(std::span<const double> row) const;
  double probability(std::span<const double> row) const;  // P(label = 1)

  const std::vector<Tree>& trees() const { return trees_; }
  double base_margin() const { return base_margin_; }

 private:
  double base_margin_ = 0.0;
  double learning_rate_ = 0.1;
  std::vector<Tree> trees_;
};

}  // namespace actorlens
