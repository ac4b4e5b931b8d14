#include "actorlens/detect.hpp"

#include <algorithm>

#include "actorlens/error.hpp"
#include "json.hpp"

namespace actorlens {

void DetectorConfig::validate() const {
  if (afk_threshold_s <= 0) {
    throw Error(ErrorCode::bad_filter, "afk_threshold_s", "afk threshold must be > 0");
  }
  if (!(feeder_ratio_threshold > 0.0 && feeder_ratio_threshold < 1.0)) {
    throw Error(ErrorCode::bad_filter, "feeder_ratio_threshold", "ratio threshold must be in (0, 1)");
  }
  if (feeder_count_threshold < 1) {
    throw Error(ErrorCode::bad_filter, "feeder_count_threshold", "count threshold must be >= 1");
  }
}

std::string_view to_string(DeathReason reason) {
  switch (reason) {
    case DeathReason::turret_diving: return "turret_diving";
    case DeathReason::overextending: return "overextending";
    case DeathReason::disguise_resistance: return "disguise_resistance";
  }
  return "turret_diving";
}

std::string_view to_string(LowLevelReason reason) {
  return reason == LowLevelReason::afk ? "afk" : "feeder";
}

std::vector<DeathReason> DeathVerdict::reasons() const {
  std::vector<DeathReason> out;
  if (turret_diving) out.push_back(DeathReason::turret_diving);
  if (overextending) out.push_back(DeathReason::overextending);
  if (disguise_resistance) out.push_back(DeathReason::disguise_resistance);
  return out;
}

bool is_afk_actor(std::int64_t idle_time_s, const DetectorConfig& cfg) {
  return idle_time_s >= cfg.afk_threshold_s;
}

DeathVerdict classify_death(const DeathRecord& d, const DetectorConfig& cfg) {
  DeathVerdict v;
  const bool no_hero_damage_dealt = d.player_to_hero == 0.0;
  const bool hit_by_heroes = d.hero_to_player != 0.0;

  // Killed by a turret without fighting back at all.
  if (d.player_to_turret == 0.0 && no_hero_damage_dealt && !hit_by_heroes &&
      d.turret_to_player != 0.0) {
    v.turret_diving = true;
  }
  if (no_hero_damage_dealt && hit_by_heroes) {
    if (d.dead_in_turret) {
      v.turret_diving = true;
    } else if (d.hero_number_to_player >= 3) {
      v.overextending = true;
    }
  }

  const double received = d.hero_to_player + d.turret_to_player;
  if (received > 0.0) {
    const double dealt = d.player_to_hero + d.player_to_turret;
    if (dealt / received <= cfg.feeder_ratio_threshold) v.disguise_resistance = true;
  }
  return v;
}

std::int64_t suspected_death_count(std::span<const DeathRecord> deaths, const DetectorConfig& cfg) {
  return std::count_if(deaths.begin(), deaths.end(),
                       [&](const DeathRecord& d) { return classify_death(d, cfg).suspected(); });
}

bool is_feeder(std::span<const DeathRecord> deaths, const DetectorConfig& cfg) {
  return suspected_death_count(deaths, cfg) >= cfg.feeder_count_threshold;
}

std::vector<DeathRecord> deaths_of(const MatchRecord& match, std::string_view player_id) {
  std::vector<DeathRecord> out;
  for (const KeyEvent& e : match.key_events) {
    if (e.kind == KeyEventKind::death && e.death && e.death->victim == player_id) {
      out.push_back(*e.death);
    }
  }
  return out;
}

std::vector<LowLevelReason> DetectionRow::reasons() const {
  std::vector<LowLevelReason> out;
  if (afk) out.push_back(LowLevelReason::afk);
  if (feeder) out.push_back(LowLevelReason::feeder);
  return out;
}

std::vector<DetectionRow> LowLevelPartition::low_level() const {
  std::vector<DetectionRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [](const DetectionRow& r) { return r.low_level(); });
  return out;
}

std::vector<MemberKey> LowLevelPartition::remaining() const {
  std::vector<MemberKey> out;
  for (const auto& r : rows) {
    if (!r.low_level()) out.push_back({r.match_id, r.player_id});
  }
  return out;
}

DetectionRow detect_player(const MatchRecord& match, std::size_t player_index, const DetectorConfig& cfg) {
  const PlayerMatch& p = match.players.at(player_index);
  DetectionRow row;
  row.match_id = match.match_id;
  row.player_id = p.player_id;
  row.idle_time_s = p.summary.idle_time_s;
  row.afk = is_afk_actor(row.idle_time_s, cfg);
  const auto deaths = deaths_of(match, p.player_id);
  row.suspected_death_count = suspected_death_count(deaths, cfg);
  row.feeder = row.suspected_death_count >= cfg.feeder_count_threshold;
  return row;
}

LowLevelPartition filter_low_level(std::span<const MatchRecord> matches, const DetectorConfig& cfg) {
  LowLevelPartition out;
  for (const MatchRecord& m : matches) {
    for (std::size_t i = 0; i < m.players.size(); ++i) out.rows.push_back(detect_player(m, i, cfg));
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const DetectionRow& a, const DetectionRow& b) {
    return std::tie(a.match_id, a.player_id) < std::tie(b.match_id, b.player_id);
  });
  return out;
}

std::string detection_report_line(const DetectionRow& row, const DetectorConfig& cfg) {
  nlohmann::ordered_json j;
  j["match_id"] = row.match_id;
  j["player_id"] = row.player_id;
  j["low_level"] = row.low_level();
  auto reasons = nlohmann::ordered_json::array();
  for (auto r : row.reasons()) reasons.push_back(to_string(r));
  j["reasons"] = std::move(reasons);
  j["idle_time_s"] = row.idle_time_s;
  j["suspected_death_count"] = row.suspected_death_count;
  j["thresholds"] = {{"afk_threshold_s", cfg.afk_threshold_s},
                     {"ratio_threshold", cfg.feeder_ratio_threshold},
                     {"count_threshold", cfg.feeder_count_threshold}};
  return j.dump();
}

}  // namespace actorlens
