#include "actorlens/events.hpp"

#include <algorithm>

#include "actorlens/error.hpp"

namespace actorlens {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::turret_destruction: return "turret_destruction";
    case EventKind::dragon_killing: return "dragon_killing";
    case EventKind::hero_killing: return "hero_killing";
    case EventKind::death: return "death";
    case EventKind::assist: return "assist";
    case EventKind::poke: return "poke";
    case EventKind::monster_killing: return "monster_killing";
    case EventKind::minion_killing: return "minion_killing";
    case EventKind::inaction: return "inaction";
  }
  return "inaction";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (EventKind k : kAllEventKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::vector<EventKind> EventKindSet::members() const {
  std::vector<EventKind> out;
  for (EventKind k : kAllEventKinds) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

EventKind priority_event(EventKindSet kinds) {
  for (EventKind k : kAllEventKinds) {
    if (kinds.contains(k)) return k;
  }
  return EventKind::inaction;
}

std::vector<EventKind> priority_sequence(const std::vector<MinuteEvents>& minutes) {
  std::vector<EventKind> out;
  out.reserve(minutes.size());
  for (const auto& m : minutes) out.push_back(priority_event(m));
  return out;
}

std::vector<MinuteEvents> abstract_minutes(const MatchRecord& match, std::string_view player_id) {
  return abstract_minutes(match, match.require_index(player_id));
}

std::vector<MinuteEvents> abstract_minutes(const MatchRecord& match, std::size_t player_index) {
  const std::string& me = match.players.at(player_index).player_id;
  const auto minutes = static_cast<std::size_t>(minute_count(match.duration_s));
  std::vector<MinuteEvents> out(minutes);
  // Objectives where the player landed the final blow in that minute.
  std::vector<EventKindSet> full(minutes);

  for (std::size_t m = 0; m < minutes; ++m) {
    out[m].minute_index = static_cast<std::int64_t>(m);
    if (match.frames.empty()) continue;
    const PlayerFrame d = minute_delta(match, player_index, m);
    out[m].poke_damage = std::max(0.0, d.damage_to_hero);
    out[m].monster_economy = std::max(0.0, d.monster_gold);
    out[m].minion_economy = std::max(0.0, d.minion_gold);
    if (out[m].poke_damage > 0) out[m].kinds_present.insert(EventKind::poke);
    if (out[m].monster_economy > 0) out[m].kinds_present.insert(EventKind::monster_killing);
    if (out[m].minion_economy > 0) out[m].kinds_present.insert(EventKind::minion_killing);
  }

  for (const KeyEvent& e : match.key_events) {
    if (minutes == 0) break;
    const std::size_t m = minute_of(match, e.timestamp_s);
    const bool principal = e.principal == me;
    const bool assisted = std::find(e.assists.begin(), e.assists.end(), me) != e.assists.end();
    switch (e.kind) {
      case KeyEventKind::death:
        if (e.death && e.death->victim == me) out[m].kinds_present.insert(EventKind::death);
        if (principal) out[m].kinds_present.insert(EventKind::hero_killing);
        if (assisted) out[m].kinds_present.insert(EventKind::assist);
        break;
      case KeyEventKind::turret_destroyed:
      case KeyEventKind::dragon_killed:
      case KeyEventKind::baron_killed: {
        const EventKind kind = e.kind == KeyEventKind::turret_destroyed ? EventKind::turret_destruction
                                                                        : EventKind::dragon_killing;
        if (principal) {
          out[m].kinds_present.insert(kind);
          full[m].insert(kind);
        } else if (assisted) {
          out[m].kinds_present.insert(kind);
          out[m].contributed_only.insert(kind);
        }
        break;
      }
    }
  }

  for (std::size_t m = 0; m < minutes; ++m) {
    for (EventKind k : full[m].members()) out[m].contributed_only.erase(k);
    if (out[m].kinds_present.empty()) out[m].kinds_present.insert(EventKind::inaction);
  }
  return out;
}

namespace {

Point centroid(const std::vector<Point>& pos, const std::vector<std::size_t>& group) {
  Point c;
  for (auto i : group) {
    c.x += pos[i].x;
    c.y += pos[i].y;
  }
  c.x /= static_cast<double>(group.size());
  c.y /= static_cast<double>(group.size());
  return c;
}

std::vector<std::size_t> within(const std::vector<Point>& pos, Point center, double radius) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (distance(pos[i], center) <= radius) out.push_back(i);
  }
  return out;
}

}  // namespace

std::optional<std::vector<std::size_t>> proximity_group(const MatchRecord& match, std::size_t sample,
                                                        const TeamCombatConfig& cfg) {
  const std::vector<Point>& pos = match.movement.at(sample).positions;
  std::optional<std::vector<std::size_t>> best;
  for (std::size_t seed = 0; seed < pos.size(); ++seed) {
    std::vector<std::size_t> group = within(pos, pos[seed], cfg.radius);
    bool stable = false;
    for (int iter = 0; iter < 16 && !group.empty(); ++iter) {
      auto next = within(pos, centroid(pos, group), cfg.radius);
      if (next == group) {
        stable = true;
        break;
      }
      group = std::move(next);
    }
    if (!stable) continue;
    std::size_t blue = 0;
    std::size_t red = 0;
    for (auto i : group) (match.players[i].team == Team::blue ? blue : red)++;
    if (blue < cfg.min_per_team || red < cfg.min_per_team) continue;
    if (!best || group.size() > best->size()) best = std::move(group);
  }
  return best;
}

std::vector<TeamCombat> detect_team_combats(const MatchRecord& match, const TeamCombatConfig& cfg) {
  struct Hit {
    std::size_t sample;
    std::vector<std::size_t> group;
  };
  std::vector<Hit> hits;
  for (std::size_t k = 0; k < match.movement.size(); ++k) {
    auto group = proximity_group(match, k, cfg);
    if (!group || match.frames.empty()) continue;
    const auto t = match.movement[k].timestamp_s;
    const auto interval = std::min<std::size_t>(static_cast<std::size_t>(t / kFrameIntervalS),
                                                match.frames.size() - 1);
    double damage = 0.0;
    for (auto p : *group) damage += interval_delta(match, p, interval).damage_to_hero;
    if (damage > 0.0) hits.push_back({k, std::move(*group)});
  }

  std::vector<TeamCombat> out;
  std::vector<bool> in_combat(match.players.size(), false);
  auto flush = [&](std::size_t first, std::size_t last) {
    TeamCombat c;
    c.start_s = match.movement[first].timestamp_s;
    c.end_s = match.movement[last].timestamp_s + kMovementIntervalS;
    if (c.end_s - c.start_s < cfg.min_span_s) return;
    for (std::size_t p = 0; p < in_combat.size(); ++p) {
      if (in_combat[p]) c.participants.push_back(match.players[p].player_id);
    }
    out.push_back(std::move(c));
  };

  std::size_t run_first = 0;
  std::size_t run_last = 0;
  bool open = false;
  for (const Hit& h : hits) {
    if (open && h.sample > run_last + 1 + cfg.gap_tolerance) {
      flush(run_first, run_last);
      std::fill(in_combat.begin(), in_combat.end(), false);
      open = false;
    }
    if (!open) {
      run_first = h.sample;
      open = true;
    }
    run_last = h.sample;
    for (auto p : h.group) in_combat[p] = true;
  }
  if (open) flush(run_first, run_last);
  return out;
}

}  // namespace actorlens
