#include "actorlens/model.hpp"

#include <ctime>

namespace actorlens {

std::string_view to_string(Label label) { return label == Label::actor ? "actor" : "normal"; }

std::string_view to_string(LabelSource source) { return source == LabelSource::model ? "model" : "human"; }

std::optional<Label> parse_label(std::string_view text) {
  if (text == "normal") return Label::normal;
  if (text == "actor") return Label::actor;
  return std::nullopt;
}

std::optional<LabelSource> parse_label_source(std::string_view text) {
  if (text == "human") return LabelSource::human;
  if (text == "model") return LabelSource::model;
  return std::nullopt;
}

std::string format_timestamp(std::int64_t unix_s) {
  const auto t = static_cast<std::time_t>(unix_s);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double Classifier::actor_probability(const FeatureVector& x) const { return model_.probability(x); }

std::pair<Label, double> Classifier::classify(const FeatureVector& x) const {
  const double p = actor_probability(x);
  return p >= 0.5 ? std::pair{Label::actor, p} : std::pair{Label::normal, 1.0 - p};
}

TrainResult train(std::span<const LabeledExample> examples, const ModelConfig& cfg) {
  InsufficientLabels counts;
  for (const auto& e : examples) ++(e.label == Label::actor ? counts.actor : counts.normal);
  if (counts.actor < cfg.min_labels_per_class || counts.normal < cfg.min_labels_per_class) return counts;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<double> weights;
  const double n = static_cast<double>(examples.size());
  const double w_actor = n / (2.0 * static_cast<double>(counts.actor));
  const double w_normal = n / (2.0 * static_cast<double>(counts.normal));
  for (const auto& e : examples) {
    rows.emplace_back(e.features.begin(), e.features.end());
    labels.push_back(e.label == Label::actor ? 1 : 0);
    weights.push_back(e.label == Label::actor ? w_actor : w_normal);
  }
  return Classifier(Gbdt::fit(rows, labels, weights, cfg.gbdt));
}

std::vector<LabelRecord> predict(const Classifier& classifier, std::span<const PredictionTarget> targets,
                                 const std::set<MemberKey>& human_labeled, std::int64_t created_at) {
  std::vector<LabelRecord> out;
  for (const auto& t : targets) {
    if (human_labeled.count(t.key)) continue;
    const auto [label, confidence] = classifier.classify(t.features);
    out.push_back({t.key.match_id, t.key.player_id, label, LabelSource::model, confidence, created_at});
  }
  return out;
}

}  // namespace actorlens
