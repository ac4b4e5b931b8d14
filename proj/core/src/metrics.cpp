#include "actorlens/metrics.hpp"

#include <algorithm>

namespace actorlens {

std::array<double, kMetricCount> MetricVector::as_array() const {
  std::array<double, kMetricCount> out{};
  for (std::size_t i = 0; i < kEventKindCount; ++i) out[i] = static_cast<double>(priority_counts[i]);
  out[kEventKindCount] = inactive_percentage;
  out[kEventKindCount + 1] = static_cast<double>(report_count);
  return out;
}

const std::array<std::string_view, kMetricCount>& metric_names() {
  static const std::array<std::string_view, kMetricCount> names = [] {
    std::array<std::string_view, kMetricCount> n{};
    for (std::size_t i = 0; i < kEventKindCount; ++i) n[i] = to_string(kAllEventKinds[i]);
    n[kEventKindCount] = "inactive_percentage";
    n[kEventKindCount + 1] = "report_count";
    return n;
  }();
  return names;
}

std::optional<std::size_t> metric_index(std::string_view name) {
  const auto& names = metric_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<double> activeness_score(double player_hero_damage, double team_hero_damage,
                                       double player_economy_gain, double team_economy_gain) {
  double sum = 0.0;
  int defined = 0;
  if (team_hero_damage > 0.0) {
    sum += player_hero_damage / team_hero_damage;
    ++defined;
  }
  if (team_economy_gain > 0.0) {
    sum += player_economy_gain / team_economy_gain;
    ++defined;
  }
  if (defined == 0) return std::nullopt;
  return sum / defined;
}

std::vector<std::optional<double>> interval_activeness(const MatchRecord& match, std::size_t player_index) {
  const Team team = match.players.at(player_index).team;
  std::vector<std::optional<double>> out;
  out.reserve(match.frames.size());
  for (std::size_t i = 0; i < match.frames.size(); ++i) {
    double team_damage = 0.0;
    double team_gold = 0.0;
    PlayerFrame mine;
    for (std::size_t p = 0; p < match.players.size(); ++p) {
      if (match.players[p].team != team) continue;
      const PlayerFrame d = interval_delta(match, p, i);
      team_damage += d.damage_to_hero;
      team_gold += d.gold;
      if (p == player_index) mine = d;
    }
    out.push_back(activeness_score(mine.damage_to_hero, team_damage, mine.gold, team_gold));
  }
  return out;
}

double inactive_percentage(const MatchRecord& match, std::string_view player_id, const MetricsConfig& cfg) {
  return inactive_percentage(match, match.require_index(player_id), cfg);
}

double inactive_percentage(const MatchRecord& match, std::size_t player_index, const MetricsConfig& cfg) {
  std::size_t defined = 0;
  std::size_t inactive = 0;
  for (const auto& score : interval_activeness(match, player_index)) {
    if (!score) continue;
    ++defined;
    if (*score < cfg.activeness_threshold) ++inactive;
  }
  return defined == 0 ? 0.0 : static_cast<double>(inactive) / static_cast<double>(defined);
}

std::vector<double> minute_inactive_fraction(const MatchRecord& match, std::size_t player_index,
                                             const MetricsConfig& cfg) {
  const auto scores = interval_activeness(match, player_index);
  const auto minutes = static_cast<std::size_t>(minute_count(match.duration_s));
  const std::size_t per_minute = kMinuteS / kFrameIntervalS;
  std::vector<double> out(minutes, 0.0);
  for (std::size_t m = 0; m < minutes; ++m) {
    std::size_t total = 0;
    std::size_t inactive = 0;
    for (std::size_t i = m * per_minute; i < std::min(scores.size(), (m + 1) * per_minute); ++i) {
      ++total;
      if (scores[i] && *scores[i] < cfg.activeness_threshold) ++inactive;
    }
    if (total > 0) out[m] = static_cast<double>(inactive) / static_cast<double>(total);
  }
  return out;
}

double kda(std::int64_t kills, std::int64_t assists, std::int64_t deaths) {
  return static_cast<double>(kills + assists) / static_cast<double>(deaths + 1);
}

std::size_t lane_opponent(const MatchRecord& match, std::size_t player_index) {
  const PlayerMatch& me = match.players.at(player_index);
  std::vector<std::size_t> same_lane;
  std::size_t own_lane_count = 0;
  for (std::size_t p = 0; p < match.players.size(); ++p) {
    if (match.players[p].lane != me.lane) continue;
    if (match.players[p].team == me.team) {
      ++own_lane_count;
    } else {
      same_lane.push_back(p);
    }
  }
  if (same_lane.size() == 1 && own_lane_count == 1) return same_lane.front();

  // Same roster slot within the opposing team.
  std::size_t slot = 0;
  for (std::size_t p = 0; p < player_index; ++p) {
    if (match.players[p].team == me.team) ++slot;
  }
  std::size_t seen = 0;
  for (std::size_t p = 0; p < match.players.size(); ++p) {
    if (match.players[p].team == me.team) continue;
    if (seen++ == slot) return p;
  }
  return player_index;
}

std::vector<double> economic_difference_series(const MatchRecord& match, std::string_view player_id) {
  return economic_difference_series(match, match.require_index(player_id));
}

std::vector<double> economic_difference_series(const MatchRecord& match, std::size_t player_index) {
  const std::size_t opp = lane_opponent(match, player_index);
  const auto minutes = static_cast<std::size_t>(minute_count(match.duration_s));
  std::vector<double> out;
  out.reserve(minutes);
  for (std::size_t m = 0; m < minutes && !match.frames.empty(); ++m) {
    const auto& frame = match.frames[minute_end_frame(match, m)];
    out.push_back(frame.per_player.at(player_index).gold - frame.per_player.at(opp).gold);
  }
  return out;
}

MetricVector metric_vector_from(const std::vector<MinuteEvents>& minutes, double inactive_pct,
                                std::int64_t report_count) {
  MetricVector v;
  for (const auto& m : minutes) ++v.priority_counts[rank(priority_event(m))];
  v.inactive_percentage = inactive_pct;
  v.report_count = report_count;
  return v;
}

MetricVector metric_vector(const MatchRecord& match, std::string_view player_id, const MetricsConfig& cfg) {
  return metric_vector(match, match.require_index(player_id), cfg);
}

MetricVector metric_vector(const MatchRecord& match, std::size_t player_index, const MetricsConfig& cfg) {
  return metric_vector_from(abstract_minutes(match, player_index),
                            inactive_percentage(match, player_index, cfg),
                            match.players.at(player_index).summary.report_count);
}

}  // namespace actorlens
