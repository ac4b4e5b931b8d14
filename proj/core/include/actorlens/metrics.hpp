#pragma once

// Metrics for locating potential high-level actors.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "actorlens/events.hpp"
#include "actorlens/telemetry.hpp"

namespace actorlens {

struct MetricsConfig {
  double activeness_threshold = 0.1;
};

inline constexpr std::size_t kMetricCount = 11;

// Nine priority-event counts in rank order, then inactive percentage and
// report count.
struct MetricVector {
  std::array<std::int64_t, kEventKindCount> priority_counts{};
  double inactive_percentage = 0.0;
  std::int64_t report_count = 0;

  std::int64_t count(EventKind kind) const { return priority_counts[rank(kind)]; }
  std::array<double, kMetricCount> as_array() const;

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

// Names of the 11 components, usable as filter fields.
const std::array<std::string_view, kMetricCount>& metric_names();
std::optional<std::size_t> metric_index(std::string_view name);

// Mean of the defined shares player/team; a share whose team total is zero
// is left out. nullopt when neither share is defined.
std::optional<double> activeness_score(double player_hero_damage, double team_hero_damage,
                                       double player_economy_gain, double team_economy_gain);

// Activeness per 20 s interval (nullopt where undefined).
std::vector<std::optional<double>> interval_activeness(const MatchRecord& match, std::size_t player_index);

double inactive_percentage(const MatchRecord& match, std::string_view player_id, const MetricsConfig& cfg = {});
double inactive_percentage(const MatchRecord& match, std::size_t player_index, const MetricsConfig& cfg = {});

// Fraction of the minute's intervals (up to three) flagged inactive.
std::vector<double> minute_inactive_fraction(const MatchRecord& match, std::size_t player_index,
                                             const MetricsConfig& cfg = {});

double kda(std::int64_t kills, std::int64_t assists, std::int64_t deaths);

// Lane-matched opponent: same lane on the other team, falling back to the
// same roster slot on the other team when the lane is missing or ambiguous.
std::size_t lane_opponent(const MatchRecord& match, std::size_t player_index);

// Cumulative gold minus the lane opponent's, at the end of every minute.
std::vector<double> economic_difference_series(const MatchRecord& match, std::string_view player_id);
std::vector<double> economic_difference_series(const MatchRecord& match, std::size_t player_index);

MetricVector metric_vector(const MatchRecord& match, std::string_view player_id, const MetricsConfig& cfg = {});
MetricVector metric_vector(const MatchRecord& match, std::size_t player_index, const MetricsConfig& cfg = {});

// Pure aggregation step, exposed for fixtures that start from abstracted minutes.
MetricVector metric_vector_from(const std::vector<MinuteEvents>& minutes, double inactive_pct,
                                std::int64_t report_count);

}  // namespace actorlens
