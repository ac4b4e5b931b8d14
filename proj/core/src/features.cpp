#include "actorlens/features.hpp"

#include <algorithm>

namespace actorlens {

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static constexpr std::array<std::string_view, kFeatureCount> names{
      "gametime",
      "playerproficiencylv",
      "playerherotype",
      "grade",
      "roleelo",
      "dmgtotal",
      "dmgtohero",
      "towerhurt",
      "rcvdmgfromall",
      "rcvdmgfromhero",
      "rcvdmgfromother",
      "kills",
      "die",
      "assistant",
      "coin",
      "playermonsterkillcoin",
      "moneyforkill",
      "playersoldierkillcoin",
      "killsoldiers",
      "battleresult",
      "surrendertimes",
      "healthyrecall",
      "equiptotalbuy",
      "playeroffline",
      "playerreconnection",
      "skillusetimes",
      "skillmisstimes",
      "playerkilllittledragoncnt",
      "playerkillbigdragoncnt",
      "killbluebuff",
      "killredbuff",
      "triplekill",
      "fourkill",
      "fivekill",
      "playervisiblewardcount",
      "idle_time",
      "dmgtohero_teams_per",
      "kills_teams_per",
      "die_teams_per",
      "assistant_teams_per",
      "coin_teams_per",
      "idle_time_per",
      "tower_dead",
  };
  return names;
}

std::optional<std::size_t> feature_index(std::string_view name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

std::int64_t hero_type_code(std::string_view hero_type) {
  static constexpr std::array<std::string_view, 6> codebook{"assassin", "fighter", "mage",
                                                            "marksman", "support", "tank"};
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    if (codebook[i] == hero_type) return static_cast<std::int64_t>(i);
  }
  return static_cast<std::int64_t>(codebook.size());
}

FeatureVector extract_features(const MatchRecord& match, std::string_view player_id) {
  return extract_features(match, match.require_index(player_id));
}

namespace {

double share(double mine, double team) { return team > 0.0 ? std::clamp(mine / team, 0.0, 1.0) : 0.0; }

}  // namespace

FeatureVector extract_features(const MatchRecord& match, std::size_t player_index) {
  const PlayerMatch& p = match.players.at(player_index);
  const MatchSummaryStats& s = p.summary;

  double team_hero_damage = 0.0;
  double team_kills = 0.0;
  double team_deaths = 0.0;
  double team_assists = 0.0;
  double team_gold = 0.0;
  for (const auto& q : match.players) {
    if (q.team != p.team) continue;
    team_hero_damage += q.summary.damage_to_hero;
    team_kills += static_cast<double>(q.summary.kills);
    team_deaths += static_cast<double>(q.summary.deaths);
    team_assists += static_cast<double>(q.summary.assists);
    team_gold += q.summary.total_gold;
  }

  std::int64_t tower_dead = 0;
  for (const auto& e : match.key_events) {
    if (e.kind == KeyEventKind::death && e.death && e.death->victim == p.player_id && e.death->dead_in_turret) {
      ++tower_dead;
    }
  }

  const auto d = [](std::int64_t v) { return static_cast<double>(v); };
  const double duration = static_cast<double>(match.duration_s);
  return FeatureVector{
      duration,
      d(p.profile.proficiency_level),
      d(hero_type_code(p.hero_type)),
      d(p.profile.grade),
      p.profile.elo,
      s.damage_total,
      s.damage_to_hero,
      s.damage_to_turret,
      s.received_from_all,
      s.received_from_hero,
      s.received_from_other,
      d(s.kills),
      d(s.deaths),
      d(s.assists),
      s.total_gold,
      s.monster_gold,
      s.kill_gold,
      s.minion_gold,
      d(s.minions_killed),
      s.battle_result == BattleResult::win ? 1.0 : 0.0,
      d(s.surrender_times),
      d(s.healthy_recall),
      d(s.equipment_purchases),
      d(s.offline_count),
      d(s.reconnect_count),
      d(s.skill_hits),
      d(s.skill_misses),
      d(s.dragon_kills),
      d(s.baron_kills),
      d(s.blue_buff_kills),
      d(s.red_buff_kills),
      d(s.triple_kills),
      d(s.quadra_kills),
      d(s.penta_kills),
      d(s.visible_wards),
      d(s.idle_time_s),
      share(s.damage_to_hero, team_hero_damage),
      share(d(s.kills), team_kills),
      share(d(s.deaths), team_deaths),
      share(d(s.assists), team_assists),
      share(s.total_gold, team_gold),
      duration > 0.0 ? std::clamp(d(s.idle_time_s) / duration, 0.0, 1.0) : 0.0,
      d(tower_dead),
  };
}

}  // namespace actorlens
