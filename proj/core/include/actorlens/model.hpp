#pragma once

// Label records and the recommender that propagates human labels to the
// remaining player-matches.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "actorlens/features.hpp"
#include "actorlens/gbdt.hpp"
#include "actorlens/telemetry.hpp"

namespace actorlens {

enum class Label : std::uint8_t { normal, actor };
enum class LabelSource : std::uint8_t { human, model };

std::string_view to_string(Label label);
std::string_view to_string(LabelSource source);
std::optional<Label> parse_label(std::string_view text);
std::optional<LabelSource> parse_label_source(std::string_view text);

struct LabelRecord {
  std::string match_id;
  std::string player_id;
  Label label = Label::normal;
  LabelSource source = LabelSource::human;
  double confidence = 1.0;
  std::int64_t created_at = 0;  // unix seconds

  MemberKey key() const { return {match_id, player_id}; }
  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

// "2026-01-02T03:04:05Z"
std::string format_timestamp(std::int64_t unix_s);

struct LabeledExample {
  MemberKey key;
  FeatureVector features{};
  Label label = Label::normal;
};

struct ModelConfig {
  GbdtParams gbdt;
  std::size_t min_labels_per_class = 3;
};

struct InsufficientLabels {
  std::size_t normal = 0;
  std::size_t actor = 0;
};

class Classifier {
 public:
  explicit Classifier(Gbdt model) : model_(std::move(model)) {}

  double actor_probability(const FeatureVector& x) const;
  // Predicted label with the probability of that label (>= 0.5).
  std::pair<Label, double> classify(const FeatureVector& x) const;

  const Gbdt& ensemble() const { return model_; }

 private:
  Gbdt model_;
};

using TrainResult = std::variant<Classifier, InsufficientLabels>;

// Classes are weighted by inverse frequency so each carries half the mass.
TrainResult train(std::span<const LabeledExample> examples, const ModelConfig& cfg = {});

struct PredictionTarget {
  MemberKey key;
  FeatureVector features{};
};

// One model-sourced record per target, skipping any target in
// human_labeled. Order follows the targets.
std::vector<LabelRecord> predict(const Classifier& classifier, std::span<const PredictionTarget> targets,
                                 const std::set<MemberKey>& human_labeled, std::int64_t created_at);

}  // namespace actorlens
