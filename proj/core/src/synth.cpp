#include "actorlens/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "actorlens/error.hpp"
#include "json.hpp"
#include "random.hpp"

namespace actorlens {

std::string_view to_string(Archetype archetype) {
  switch (archetype) {
    case Archetype::normal_laner: return "normal_laner";
    case Archetype::normal_jungler: return "normal_jungler";
    case Archetype::afk: return "afk";
    case Archetype::feeder: return "feeder";
    case Archetype::dragon_no_show: return "dragon_no_show";
    case Archetype::base_defense_no_show: return "base_defense_no_show";
  }
  return "normal_laner";
}

std::string_view to_string(TrueClass c) {
  switch (c) {
    case TrueClass::normal: return "normal";
    case TrueClass::low_level_afk: return "low_level_afk";
    case TrueClass::low_level_feeder: return "low_level_feeder";
    case TrueClass::high_level_actor: return "high_level_actor";
  }
  return "normal";
}

std::optional<TrueClass> parse_true_class(std::string_view text) {
  for (TrueClass c : {TrueClass::normal, TrueClass::low_level_afk, TrueClass::low_level_feeder,
                      TrueClass::high_level_actor}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

TrueClass true_class_of(const BehaviorScript& s) {
  switch (s.archetype) {
    case Archetype::normal_laner:
    case Archetype::normal_jungler:
      return TrueClass::normal;
    case Archetype::afk:
      return s.idle_span_s >= 120 ? TrueClass::low_level_afk : TrueClass::high_level_actor;
    case Archetype::feeder:
      return s.suspected_deaths >= 3 ? TrueClass::low_level_feeder : TrueClass::high_level_actor;
    case Archetype::dragon_no_show:
    case Archetype::base_defense_no_show:
      return TrueClass::high_level_actor;
  }
  return TrueClass::normal;
}

std::int64_t scripted_dragon_fight_time(std::int64_t duration_s) {
  return duration_s >= 1080 ? 840 : (duration_s / 2 / 60) * 60;
}

Point dragon_pit() { return {0.68, 0.32}; }

namespace {

using detail::Rng;

constexpr std::array<Lane, kPlayersPerTeam> kSlotLanes{Lane::top, Lane::mid, Lane::bottom,
                                                       Lane::jungle, Lane::support};
constexpr std::array<const char*, 6> kHeroTypes{"assassin", "fighter", "mage",
                                                "marksman", "support", "tank"};

Point clamp_unit(Point p) { return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)}; }

Point mirror(Point p) { return {1.0 - p.x, 1.0 - p.y}; }

// Geometry is authored from blue's point of view and mirrored for red.
Point for_team(Team team, Point blue_point) { return team == Team::blue ? blue_point : mirror(blue_point); }

Point base_of(Team team) { return for_team(team, {0.04, 0.04}); }

Point lane_spot(Team team, Lane lane) {
  switch (lane) {
    case Lane::top: return for_team(team, {0.10, 0.60});
    case Lane::mid: return for_team(team, {0.42, 0.42});
    case Lane::bottom: return for_team(team, {0.60, 0.10});
    case Lane::jungle: return for_team(team, {0.28, 0.30});
    case Lane::support: return for_team(team, {0.55, 0.14});
  }
  return base_of(team);
}

// Enemy turret a player of `team` attacks when pushing `lane`.
Point enemy_turret(Team team, Lane lane) {
  switch (lane) {
    case Lane::top: return for_team(team, {0.25, 0.92});
    case Lane::bottom:
    case Lane::support: return for_team(team, {0.92, 0.25});
    case Lane::mid:
    case Lane::jungle: return for_team(team, {0.66, 0.66});
  }
  return for_team(team, {0.66, 0.66});
}

Point own_base_turret(Team team) { return for_team(team, {0.15, 0.15}); }
Point baron_pit() { return {0.32, 0.68}; }

// A spot on the player's side at least 0.35 from `avoid`.
Point far_spot(Team team, Lane lane, Point avoid) {
  const std::array<Point, 5> candidates{lane_spot(team, lane), lane_spot(team, Lane::top),
                                        for_team(team, {0.20, 0.55}), for_team(team, {0.10, 0.35}),
                                        for_team(team, {0.35, 0.12})};
  for (Point c : candidates) {
    if (distance(c, avoid) >= 0.35) return c;
  }
  return for_team(team, {0.10, 0.85});
}

enum class Mode : std::uint8_t { normal, passive, minion_only, monster_only, fight };

struct Window {
  std::int64_t from;
  std::int64_t to;  // exclusive
  bool contains(std::int64_t t) const { return t >= from && t < to; }
};

struct Plan {
  BehaviorScript script;
  std::string player_id;
  Team team = Team::blue;
  Lane lane = Lane::top;
  Rng rng{0};
  double gold_rate_per_min = 0.0;
  std::vector<Mode> modes;                    // per interval
  std::vector<std::optional<Point>> pinned;   // per movement sample
  std::vector<Window> reserved;               // no incidental events
  std::vector<std::int64_t> death_times;

  bool passive_at(std::int64_t t) const {
    const auto i = static_cast<std::size_t>(t / kFrameIntervalS);
    return i < modes.size() && modes[i] == Mode::passive;
  }
  bool reserved_at(std::int64_t t) const {
    return std::any_of(reserved.begin(), reserved.end(), [&](const Window& w) { return w.contains(t); });
  }
  bool eligible(std::int64_t t) const { return !passive_at(t) && !reserved_at(t); }
  bool death_near(std::int64_t t, std::int64_t gap) const {
    return std::any_of(death_times.begin(), death_times.end(),
                       [&](std::int64_t d) { return std::llabs(d - t) < gap; });
  }
};

struct MatchBuilder {
  std::int64_t duration = 0;
  std::size_t intervals = 0;
  std::size_t samples = 0;
  Rng rng{0};
  std::vector<Plan> plans;
  std::vector<KeyEvent> events;
  // Extra gold per (player, interval) from kills and assists.
  std::vector<std::vector<double>> kill_gold;
  std::vector<std::int64_t> fight_times;

  std::size_t interval_of(std::int64_t t) const {
    return std::min(static_cast<std::size_t>(t / kFrameIntervalS), intervals - 1);
  }
  std::size_t sample_of(std::int64_t t) const {
    return std::min(static_cast<std::size_t>(t / kMovementIntervalS), samples - 1);
  }

  std::vector<std::size_t> team_members(Team team) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < plans.size(); ++p) {
      if (plans[p].team == team) out.push_back(p);
    }
    return out;
  }

  std::vector<std::size_t> eligible_members(Team team, std::int64_t t, std::size_t exclude = 99) const {
    std::vector<std::size_t> out;
    for (auto p : team_members(team)) {
      if (p != exclude && plans[p].eligible(t)) out.push_back(p);
    }
    return out;
  }

  void pin(std::size_t p, std::int64_t t, Point pos) {
    if (t < 0 || t > duration) return;
    plans[p].pinned[sample_of(t)] = clamp_unit(pos);
  }

  Point jitter(Point p, double amount) {
    return clamp_unit({p.x + rng.uniform(-amount, amount), p.y + rng.uniform(-amount, amount)});
  }

  void add_kill_credit(std::size_t killer, const std::vector<std::size_t>& assists, std::int64_t t) {
    const auto i = interval_of(t);
    kill_gold[killer][i] += 300.0;
    for (auto a : assists) kill_gold[a][i] += 100.0;
  }

  std::vector<std::string> ids(const std::vector<std::size_t>& members) const {
    std::vector<std::string> out;
    for (auto m : members) out.push_back(plans[m].player_id);
    return out;
  }

  // A death the victim fought back in: never matches a suspected branch.
  DeathRecord fair_death(std::size_t victim, std::size_t heroes) {
    DeathRecord d;
    d.victim = plans[victim].player_id;
    d.hero_to_player = std::round(rng.uniform(500, 1500));
    d.turret_to_player = rng.chance(0.3) ? std::round(rng.uniform(50, 300)) : 0.0;
    const double received = d.hero_to_player + d.turret_to_player;
    d.player_to_hero = std::round(received * rng.uniform(0.6, 1.2));
    d.player_to_turret = rng.chance(0.2) ? std::round(rng.uniform(10, 200)) : 0.0;
    d.hero_number_to_player = static_cast<std::int64_t>(std::max<std::size_t>(heroes, 1));
    d.dead_in_turret = rng.chance(0.1);
    return d;
  }

  void add_death(std::size_t victim, std::int64_t t, std::optional<std::size_t> killer,
                 std::vector<std::size_t> assists, DeathRecord detail, Point where) {
    KeyEvent e;
    e.timestamp_s = t;
    e.kind = KeyEventKind::death;
    e.team = opponent(plans[victim].team);
    e.principal = killer ? plans[*killer].player_id : "";
    e.assists = ids(assists);
    e.position = clamp_unit(where);
    e.death = std::move(detail);
    events.push_back(std::move(e));
    if (killer) add_kill_credit(*killer, assists, t);
    plans[victim].death_times.push_back(t);
    pin(victim, t, where);
    // Respawn in the highland.
    pin(victim, t + 10, jitter(base_of(plans[victim].team), 0.01));
    pin(victim, t + 20, jitter(base_of(plans[victim].team), 0.01));
  }

  void add_objective(KeyEventKind kind, std::int64_t t, std::size_t principal,
                     std::vector<std::size_t> assists, Point where) {
    KeyEvent e;
    e.timestamp_s = t;
    e.kind = kind;
    e.team = plans[principal].team;
    e.principal = plans[principal].player_id;
    e.assists = ids(assists);
    e.position = clamp_unit(where);
    events.push_back(std::move(e));
  }

  std::vector<std::size_t> pick(std::vector<std::size_t> pool, std::size_t n) {
    rng.shuffle(pool);
    if (pool.size() > n) pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
  }
};

void check_scripts(std::span<const BehaviorScript> scripts, std::int64_t duration) {
  if (scripts.size() != kPlayersPerMatch) {
    throw Error(ErrorCode::bad_script, "scripts", "expected 10 scripts, got " + std::to_string(scripts.size()));
  }
  if (duration < 600 || duration > 2400) {
    throw Error(ErrorCode::bad_script, "duration_s", "duration_s must be in [600, 2400]");
  }
  for (std::size_t i = 0; i < scripts.size(); ++i) {
    const auto& s = scripts[i];
    const std::string path = "scripts[" + std::to_string(i) + "]";
    if (s.idle_span_s < 0 || s.idle_span_s > duration) {
      throw Error(ErrorCode::bad_script, path + ".idle_span_s", "idle_span_s must be in [0, duration]");
    }
    if (s.suspected_deaths < 0 || s.suspected_deaths * 60 > duration - 240) {
      throw Error(ErrorCode::bad_script, path + ".suspected_deaths",
                  "suspected_deaths must be >= 0 and fit the match (one per minute)");
    }
    if (s.passive_s && (*s.passive_s < 0 || *s.passive_s > duration)) {
      throw Error(ErrorCode::bad_script, path + ".passive_s", "passive_s must be in [0, duration]");
    }
    if (s.report_count && *s.report_count < 0) {
      throw Error(ErrorCode::bad_script, path + ".report_count", "report_count must be >= 0");
    }
  }
}

void plan_afk(MatchBuilder& b, std::size_t p) {
  Plan& plan = b.plans[p];
  const std::int64_t passive = plan.script.passive_s.value_or(plan.script.idle_span_s);
  for (std::size_t i = 0; i < b.intervals; ++i) {
    if (static_cast<std::int64_t>(i) * kFrameIntervalS < passive) plan.modes[i] = Mode::passive;
  }
  for (std::int64_t t = 0; t < passive && t <= b.duration; t += kMovementIntervalS) {
    b.pin(p, t, b.jitter(base_of(plan.team), 0.01));
  }
  plan.reserved.push_back({0, passive + kFrameIntervalS});
}

void plan_dragon_fight(MatchBuilder& b, Team team, std::int64_t fight_t) {
  const Point pit = dragon_pit();
  std::vector<std::size_t> actors;
  std::vector<std::size_t> allies;
  for (auto p : b.team_members(team)) {
    const Plan& plan = b.plans[p];
    if (plan.script.archetype == Archetype::dragon_no_show) {
      actors.push_back(p);
    } else if (plan.script.archetype != Archetype::feeder && plan.eligible(fight_t) &&
               plan.eligible(fight_t + 40)) {
      allies.push_back(p);
    }
  }
  std::vector<std::size_t> enemies;
  for (auto p : b.team_members(opponent(team))) {
    const Plan& plan = b.plans[p];
    if (plan.script.archetype != Archetype::feeder && plan.script.archetype != Archetype::dragon_no_show &&
        plan.eligible(fight_t) && plan.eligible(fight_t + 40)) {
      enemies.push_back(p);
    }
  }
  if (allies.size() < 2 || enemies.size() < 2) {
    throw Error(ErrorCode::bad_script, "scripts",
                "dragon_no_show needs two active teammates and two active opponents for the dragon fight");
  }
  if (allies.size() > 4) allies.resize(4);
  if (enemies.size() > 4) enemies.resize(4);

  const std::int64_t minute_start = (fight_t / kMinuteS) * kMinuteS;
  for (auto a : actors) {
    Plan& plan = b.plans[a];
    const Point away = far_spot(plan.team, plan.lane, pit);
    for (std::int64_t t = fight_t - 60; t <= fight_t + 90; t += kMovementIntervalS) {
      b.pin(a, t, b.jitter(away, 0.02));
    }
    // Farming its own lane only for the fight minute and the next one.
    for (std::int64_t t = minute_start; t < minute_start + 2 * kMinuteS && t < b.duration; t += kFrameIntervalS) {
      plan.modes[b.interval_of(t)] = Mode::minion_only;
    }
    plan.reserved.push_back({minute_start - kMinuteS, minute_start + 3 * kMinuteS});
  }

  for (std::int64_t t = fight_t; t <= fight_t + 30; t += kMovementIntervalS) {
    for (auto p : allies) b.pin(p, t, b.jitter(pit, 0.03));
    for (auto p : enemies) b.pin(p, t, b.jitter(pit, 0.03));
    for (auto p : allies) b.plans[p].modes[b.interval_of(t)] = Mode::fight;
    for (auto p : enemies) b.plans[p].modes[b.interval_of(t)] = Mode::fight;
  }
  for (auto p : allies) b.plans[p].reserved.push_back({fight_t - 40, fight_t + 80});
  for (auto p : enemies) b.plans[p].reserved.push_back({fight_t - 40, fight_t + 80});

  // Two defenders fall, then the enemy takes the dragon.
  for (std::size_t k = 0; k < 2; ++k) {
    const std::size_t victim = allies[k];
    const std::size_t killer = enemies[k % enemies.size()];
    std::vector<std::size_t> assists;
    for (auto e : enemies) {
      if (e != killer && assists.size() < 2) assists.push_back(e);
    }
    const std::int64_t t = fight_t + 20 + 10 * static_cast<std::int64_t>(k);
    b.add_death(victim, t, killer, assists, b.fair_death(victim, assists.size() + 1), b.jitter(pit, 0.03));
  }
  std::vector<std::size_t> contributors(enemies.begin() + 1, enemies.end());
  b.add_objective(KeyEventKind::dragon_killed, fight_t + 30, enemies.front(), contributors, pit);
  b.fight_times.push_back(fight_t);
}

void plan_base_defense(MatchBuilder& b, std::size_t actor) {
  const Team team = b.plans[actor].team;
  const std::int64_t start = b.duration - 120;
  const Point turret = own_base_turret(team);
  const Point away = for_team(team, {0.20, 0.55});

  Plan& plan = b.plans[actor];
  for (std::int64_t t = start; t <= b.duration; t += kMovementIntervalS) b.pin(actor, t, b.jitter(away, 0.02));
  for (std::int64_t t = start; t < b.duration; t += kFrameIntervalS) plan.modes[b.interval_of(t)] = Mode::monster_only;
  plan.reserved.push_back({start - 60, b.duration + 1});

  std::vector<std::size_t> attackers = b.eligible_members(opponent(team), start);
  std::vector<std::size_t> defenders = b.eligible_members(team, start, actor);
  for (std::int64_t t = start; t <= b.duration; t += kMovementIntervalS) {
    for (auto p : attackers) b.pin(p, t, b.jitter(turret, 0.04));
    for (auto p : defenders) b.pin(p, t, b.jitter(for_team(team, {0.09, 0.09}), 0.03));
  }
  for (auto p : attackers) b.plans[p].reserved.push_back({start - 60, b.duration + 1});
  for (auto p : defenders) b.plans[p].reserved.push_back({start - 60, b.duration + 1});
  if (attackers.empty()) return;

  const std::size_t lead = attackers.front();
  std::vector<std::size_t> rest(attackers.begin() + 1, attackers.end());
  b.add_objective(KeyEventKind::turret_destroyed, b.duration - 90, lead, rest, turret);
  if (!defenders.empty()) {
    const std::size_t victim = defenders.front();
    b.add_death(victim, b.duration - 60, lead, rest, b.fair_death(victim, attackers.size()), b.jitter(turret, 0.03));
  }
  b.add_objective(KeyEventKind::turret_destroyed, b.duration - 30, attackers.back(),
                  std::vector<std::size_t>(attackers.begin(), attackers.end() - 1), base_of(team));
}

void plan_feeder(MatchBuilder& b, std::size_t p) {
  Plan& plan = b.plans[p];
  const std::int64_t k = plan.script.suspected_deaths;
  if (k == 0) return;
  const std::int64_t first = 150;
  const std::int64_t last = b.duration - 90;
  const std::int64_t step = (last - first) / std::max<std::int64_t>(k, 1);
  for (std::int64_t j = 0; j < k; ++j) {
    std::int64_t t = first + j * step + b.rng.uniform_int(0, std::max<std::int64_t>(step / 3, 1));
    t = (t / kMovementIntervalS) * kMovementIntervalS;
    const Point target = enemy_turret(plan.team, plan.lane);
    const Point start = lane_spot(plan.team, plan.lane);
    // Run straight at the enemy turret.
    for (int s = 3; s >= 1; --s) {
      const double f = 1.0 - s / 4.0;
      b.pin(p, t - 10 * s, {start.x + (target.x - start.x) * f, start.y + (target.y - start.y) * f});
    }

    auto enemies = b.eligible_members(opponent(plan.team), t);
    DeathRecord d;
    d.victim = plan.player_id;
    std::optional<std::size_t> killer;
    std::vector<std::size_t> assists;
    switch (j % 4) {
      case 0:  // Killed by the turret, no fight at all.
        d.turret_to_player = std::round(b.rng.uniform(400, 900));
        d.dead_in_turret = true;
        break;
      case 1:  // Walked into several heroes without resisting.
        d.hero_to_player = std::round(b.rng.uniform(800, 1600));
        d.hero_number_to_player = 3 + b.rng.uniform_int(0, 1);
        d.dead_in_turret = false;
        break;
      case 2:  // Token resistance.
        d.hero_to_player = std::round(b.rng.uniform(600, 1200));
        d.turret_to_player = std::round(b.rng.uniform(0, 200));
        d.player_to_hero = std::round((d.hero_to_player + d.turret_to_player) * b.rng.uniform(0.05, 0.3));
        d.hero_number_to_player = 1 + b.rng.uniform_int(0, 1);
        break;
      default:  // Dove under the turret while heroes hit it.
        d.hero_to_player = std::round(b.rng.uniform(300, 600));
        d.turret_to_player = std::round(b.rng.uniform(200, 600));
        d.hero_number_to_player = 1;
        d.dead_in_turret = true;
        break;
    }
    if (d.hero_to_player > 0 && !enemies.empty()) {
      auto chosen = b.pick(enemies, static_cast<std::size_t>(std::min<std::int64_t>(d.hero_number_to_player, 3)));
      killer = chosen.front();
      assists.assign(chosen.begin() + 1, chosen.end());
    }
    b.add_death(p, t, killer, assists, d, target);
    plan.reserved.push_back({t - 40, t + 40});
  }
}

void plan_incidental_deaths(MatchBuilder& b) {
  for (std::size_t p = 0; p < b.plans.size(); ++p) {
    Plan& plan = b.plans[p];
    std::int64_t n = 0;
    switch (plan.script.archetype) {
      case Archetype::normal_laner:
      case Archetype::normal_jungler: n = plan.rng.uniform_int(0, 5); break;
      case Archetype::feeder: n = plan.rng.uniform_int(0, 2); break;
      case Archetype::afk: n = plan.rng.uniform_int(0, 2); break;
      case Archetype::dragon_no_show:
      case Archetype::base_defense_no_show: n = plan.rng.uniform_int(0, 3); break;
    }
    for (std::int64_t attempt = 0, placed = 0; placed < n && attempt < 40; ++attempt) {
      std::int64_t t = plan.rng.uniform_int(90, b.duration - 150);
      t = (t / kMovementIntervalS) * kMovementIntervalS;
      if (!plan.eligible(t) || plan.death_near(t, 60)) continue;
      if (std::any_of(b.fight_times.begin(), b.fight_times.end(),
                      [&](std::int64_t f) { return std::llabs(f - t) < 90; })) {
        continue;
      }
      auto enemies = b.eligible_members(opponent(plan.team), t);
      if (enemies.empty()) continue;
      auto chosen = b.pick(enemies, static_cast<std::size_t>(1 + plan.rng.uniform_int(0, 2)));
      const std::size_t killer = chosen.front();
      std::vector<std::size_t> assists(chosen.begin() + 1, chosen.end());
      const Point spot = lane_spot(plan.team, plan.lane);
      const Point towards = enemy_turret(plan.team, plan.lane);
      const Point where{spot.x + (towards.x - spot.x) * 0.3, spot.y + (towards.y - spot.y) * 0.3};
      b.add_death(p, t, killer, assists, b.fair_death(p, chosen.size()), b.jitter(where, 0.03));
      ++placed;
    }
  }
}

void plan_objectives(MatchBuilder& b) {
  for (Team team : {Team::blue, Team::red}) {
    const std::int64_t n = b.rng.uniform_int(2, 4);
    for (std::int64_t j = 0; j < n; ++j) {
      const std::int64_t t = b.rng.uniform_int(300, b.duration - 180);
      std::vector<std::size_t> laners;
      for (auto p : b.eligible_members(team, t)) {
        if (b.plans[p].lane != Lane::jungle) laners.push_back(p);
      }
      if (laners.empty()) continue;
      auto chosen = b.pick(laners, static_cast<std::size_t>(1 + b.rng.uniform_int(0, 2)));
      const std::size_t lead = chosen.front();
      std::vector<std::size_t> rest(chosen.begin() + 1, chosen.end());
      b.add_objective(KeyEventKind::turret_destroyed, t, lead, rest, enemy_turret(team, b.plans[lead].lane));
    }
  }

  auto near_fight = [&](std::int64_t t) {
    return std::any_of(b.fight_times.begin(), b.fight_times.end(),
                       [&](std::int64_t f) { return std::llabs(f - t) < 150; });
  };
  auto take = [&](KeyEventKind kind, std::int64_t t, Point where) {
    if (near_fight(t)) return;
    const Team team = b.rng.chance(0.5) ? Team::blue : Team::red;
    auto pool = b.eligible_members(team, t);
    if (pool.size() < 2) return;
    std::size_t lead = pool.front();
    for (auto p : pool) {
      if (b.plans[p].lane == Lane::jungle) lead = p;
    }
    std::vector<std::size_t> others;
    for (auto p : pool) {
      if (p != lead) others.push_back(p);
    }
    b.add_objective(kind, t, lead, b.pick(others, static_cast<std::size_t>(1 + b.rng.uniform_int(0, 1))), where);
  };
  for (std::int64_t t = 300; t <= b.duration - 180; t += 300) take(KeyEventKind::dragon_killed, t, dragon_pit());
  for (std::int64_t t = 1260; t <= b.duration - 180; t += 360) take(KeyEventKind::baron_killed, t, baron_pit());
}

struct Gains {
  double minion_gold = 0;
  double monster_gold = 0;
  double hero_damage = 0;
  double other_damage = 0;
  double turret_damage = 0;
  double received = 0;
};

void fill_gains(Plan& plan, Mode mode, Gains& g) {
  Rng& r = plan.rng;
  const double base = std::round(plan.gold_rate_per_min / 3.0 * r.uniform(0.7, 1.3));
  const bool jungler = plan.lane == Lane::jungle;
  switch (mode) {
    case Mode::passive:
      return;
    case Mode::minion_only:
      g.minion_gold = base;
      g.other_damage = std::round(r.uniform(150, 500));
      g.received = std::round(r.uniform(0, 150));
      return;
    case Mode::monster_only:
      g.monster_gold = base;
      g.other_damage = std::round(r.uniform(300, 800));
      g.received = std::round(r.uniform(50, 300));
      return;
    case Mode::normal:
    case Mode::fight: {
      const bool mixed = r.chance(0.3);
      const double secondary = mixed ? std::round(base * 0.2) : 0.0;
      if (jungler) {
        g.monster_gold = base - secondary;
        g.minion_gold = secondary;
      } else {
        g.minion_gold = base - secondary;
        g.monster_gold = secondary;
      }
      if (mode == Mode::fight) {
        g.hero_damage = std::round(r.uniform(800, 1500));
        g.received = std::round(r.uniform(600, 1400));
      } else {
        g.hero_damage = r.chance(0.7) ? std::round(r.uniform(100, 600)) : 0.0;
        g.received = std::round(r.uniform(50, 500));
      }
      g.other_damage = std::round(r.uniform(100, 800));
      g.turret_damage = r.chance(0.15) ? std::round(r.uniform(100, 600)) : 0.0;
      return;
    }
  }
}

std::vector<Point> walk_positions(MatchBuilder& b, Plan& plan) {
  std::vector<Point> out(b.samples);
  Point pos = base_of(plan.team);
  std::int64_t recall_left = 0;
  for (std::size_t k = 0; k < b.samples; ++k) {
    if (plan.pinned[k]) {
      pos = *plan.pinned[k];
      out[k] = pos;
      continue;
    }
    Point target = lane_spot(plan.team, plan.lane);
    if (recall_left > 0) {
      --recall_left;
      target = base_of(plan.team);
    } else if (k > 12 && plan.rng.chance(0.02)) {
      recall_left = 2;
      target = base_of(plan.team);
    }
    pos = clamp_unit({pos.x + 0.5 * (target.x - pos.x) + 0.02 * plan.rng.normal(),
                      pos.y + 0.5 * (target.y - pos.y) + 0.02 * plan.rng.normal()});
    out[k] = pos;
  }
  return out;
}

}  // namespace

std::pair<MatchRecord, SynthGroundTruth> generate_match(std::span<const BehaviorScript> scripts,
                                                        std::int64_t duration_s, std::uint64_t seed,
                                                        const MatchOptions& options) {
  check_scripts(scripts, duration_s);
  if (!options.player_ids.empty() && options.player_ids.size() != kPlayersPerMatch) {
    throw Error(ErrorCode::bad_script, "options.player_ids", "expected 10 player ids");
  }
  if (!options.hero_ids.empty() && options.hero_ids.size() != kPlayersPerMatch) {
    throw Error(ErrorCode::bad_script, "options.hero_ids", "expected 10 hero ids");
  }

  MatchBuilder b;
  b.duration = duration_s;
  b.intervals = static_cast<std::size_t>(frame_count(duration_s));
  b.samples = static_cast<std::size_t>(movement_sample_count(duration_s));
  b.rng = Rng(detail::derive_seed(seed, 0xA11CE));
  b.kill_gold.assign(kPlayersPerMatch, std::vector<double>(b.intervals, 0.0));

  MatchRecord m;
  {
    std::ostringstream id;
    id << "m" << std::hex << (seed & 0xFFFFFFFFull);
    m.match_id = options.match_id.empty() ? id.str() : options.match_id;
  }
  m.duration_s = duration_s;
  m.ended_at = options.ended_at;

  for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
    Plan plan;
    plan.script = scripts[p];
    plan.team = p < kPlayersPerTeam ? Team::blue : Team::red;
    plan.lane = kSlotLanes[p % kPlayersPerTeam];
    plan.player_id = options.player_ids.empty() ? m.match_id + "-p" + std::to_string(p) : options.player_ids[p];
    plan.rng = Rng(detail::derive_seed(seed, 1000 + p) ^ detail::splitmix64(scripts[p].seed));
    plan.gold_rate_per_min = plan.rng.uniform(150.0, 350.0);
    plan.modes.assign(b.intervals, Mode::normal);
    plan.pinned.assign(b.samples, std::nullopt);
    b.plans.push_back(std::move(plan));
  }

  for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
    if (b.plans[p].script.archetype == Archetype::afk) plan_afk(b, p);
  }
  {
    std::int64_t fight_t = scripted_dragon_fight_time(duration_s);
    for (Team team : {Team::blue, Team::red}) {
      bool has = false;
      for (auto p : b.team_members(team)) has |= b.plans[p].script.archetype == Archetype::dragon_no_show;
      if (!has) continue;
      plan_dragon_fight(b, team, fight_t);
      fight_t += 240;
    }
  }
  for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
    if (b.plans[p].script.archetype == Archetype::base_defense_no_show) {
      plan_base_defense(b, p);
      break;
    }
  }
  for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
    if (b.plans[p].script.archetype == Archetype::feeder) plan_feeder(b, p);
  }
  plan_incidental_deaths(b);
  plan_objectives(b);
  std::stable_sort(b.events.begin(), b.events.end(),
                   [](const KeyEvent& x, const KeyEvent& y) { return x.timestamp_s < y.timestamp_s; });

  // Battle result: a base-defense no-show always loses.
  Team winner = b.rng.chance(0.5) ? Team::blue : Team::red;
  for (const auto& plan : b.plans) {
    if (plan.script.archetype == Archetype::base_defense_no_show) {
      winner = opponent(plan.team);
      break;
    }
  }

  // Hero identities.
  std::vector<std::string> heroes = options.hero_ids;
  if (heroes.empty()) {
    std::vector<int> pool(30);
    std::iota(pool.begin(), pool.end(), 1);
    b.rng.shuffle(pool);
    for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
      std::ostringstream h;
      h << "H" << (pool[p] < 10 ? "0" : "") << pool[p];
      heroes.push_back(h.str());
    }
  }

  // Cumulative series.
  m.frames.resize(b.intervals);
  for (std::size_t i = 0; i < b.intervals; ++i) {
    m.frames[i].interval_index = static_cast<std::int64_t>(i);
    m.frames[i].per_player.resize(kPlayersPerMatch);
  }
  std::vector<double> turret_damage(kPlayersPerMatch, 0.0);
  std::vector<double> received_from_hero(kPlayersPerMatch, 0.0);
  for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
    Plan& plan = b.plans[p];
    PlayerFrame cum;
    double kill_gold_total = 0.0;
    for (std::size_t i = 0; i < b.intervals; ++i) {
      Gains g;
      fill_gains(plan, plan.modes[i], g);
      const double bounty = b.kill_gold[p][i];
      kill_gold_total += bounty;
      cum.minion_gold += g.minion_gold;
      cum.monster_gold += g.monster_gold;
      cum.gold += g.minion_gold + g.monster_gold + bounty;
      cum.minions_killed += static_cast<std::int64_t>(std::round(g.minion_gold / 28.0));
      cum.damage_to_hero += g.hero_damage;
      cum.damage_total += g.hero_damage + g.other_damage + g.turret_damage;
      cum.received_damage += g.received;
      received_from_hero[p] += std::round(g.received * 0.6);
      turret_damage[p] += g.turret_damage;
      for (const KeyEvent& e : b.events) {
        if (b.interval_of(e.timestamp_s) != i || e.kind != KeyEventKind::death) continue;
        if (e.principal == plan.player_id) ++cum.kills;
        if (std::find(e.assists.begin(), e.assists.end(), plan.player_id) != e.assists.end()) ++cum.assists;
        if (e.death->victim == plan.player_id) {
          ++cum.deaths;
          cum.received_damage += e.death->hero_to_player + e.death->turret_to_player;
          received_from_hero[p] += e.death->hero_to_player;
        }
      }
      m.frames[i].per_player[p] = cum;
    }
    (void)kill_gold_total;
  }

  // Movement.
  std::vector<std::vector<Point>> tracks;
  for (auto& plan : b.plans) tracks.push_back(walk_positions(b, plan));
  m.movement.resize(b.samples);
  for (std::size_t k = 0; k < b.samples; ++k) {
    m.movement[k].timestamp_s = static_cast<std::int64_t>(k) * kMovementIntervalS;
    for (std::size_t p = 0; p < kPlayersPerMatch; ++p) m.movement[k].positions.push_back(tracks[p][k]);
  }

  // Roster and summaries.
  SynthGroundTruth truth;
  for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
    Plan& plan = b.plans[p];
    const PlayerFrame& fin = m.frames.back().per_player[p];
    PlayerMatch pm;
    pm.player_id = plan.player_id;
    pm.team = plan.team;
    pm.hero_id = heroes[p];
    {
      const auto digits = pm.hero_id.find_first_of("0123456789");
      const std::size_t code = digits == std::string::npos
                                   ? std::hash<std::string>{}(pm.hero_id)
                                   : static_cast<std::size_t>(std::stoul(pm.hero_id.substr(digits)));
      pm.hero_type = kHeroTypes[code % kHeroTypes.size()];
    }
    pm.lane = plan.lane;
    pm.profile.proficiency_level = plan.rng.uniform_int(0, 10);
    pm.profile.grade = plan.rng.uniform_int(1, 30);
    pm.profile.elo = std::round(plan.rng.uniform(800, 2400));

    MatchSummaryStats& s = pm.summary;
    s.kills = fin.kills;
    s.deaths = fin.deaths;
    s.assists = fin.assists;
    s.damage_to_hero = fin.damage_to_hero;
    s.damage_total = fin.damage_total;
    s.damage_to_turret = turret_damage[p];
    s.received_from_all = fin.received_damage;
    s.received_from_hero = std::min(received_from_hero[p], fin.received_damage);
    s.received_from_other = s.received_from_all - s.received_from_hero;
    s.total_gold = fin.gold;
    s.minion_gold = fin.minion_gold;
    s.monster_gold = fin.monster_gold;
    s.kill_gold = fin.gold - fin.minion_gold - fin.monster_gold;
    s.minions_killed = fin.minions_killed;
    s.battle_result = plan.team == winner ? BattleResult::win : BattleResult::loss;
    s.surrender_times = plan.rng.chance(0.2) ? 1 : 0;
    s.healthy_recall = plan.rng.uniform_int(0, 3);
    s.equipment_purchases = plan.rng.uniform_int(4, 12);
    s.offline_count = plan.script.archetype == Archetype::afk ? 1 : 0;
    s.reconnect_count = s.offline_count;
    s.skill_hits = plan.rng.uniform_int(40, 200);
    s.skill_misses = plan.rng.uniform_int(5, 80);
    for (const KeyEvent& e : b.events) {
      if (e.principal != plan.player_id) continue;
      if (e.kind == KeyEventKind::dragon_killed) ++s.dragon_kills;
      if (e.kind == KeyEventKind::baron_killed) ++s.baron_kills;
    }
    if (plan.lane == Lane::jungle) {
      s.blue_buff_kills = plan.rng.uniform_int(1, 4);
      s.red_buff_kills = plan.rng.uniform_int(1, 4);
    }
    s.triple_kills = s.kills >= 3 && plan.rng.chance(0.2) ? 1 : 0;
    s.visible_wards = plan.rng.uniform_int(0, plan.lane == Lane::support ? 20 : 6);

    switch (plan.script.archetype) {
      case Archetype::afk:
        s.idle_time_s = plan.script.idle_span_s;
        s.report_count = plan.rng.uniform_int(2, 6);
        break;
      case Archetype::feeder:
        s.idle_time_s = plan.rng.uniform_int(0, 60);
        s.report_count = plan.rng.uniform_int(2, 6);
        break;
      case Archetype::dragon_no_show:
      case Archetype::base_defense_no_show:
        s.idle_time_s = plan.rng.uniform_int(0, 100);
        s.report_count = plan.rng.uniform_int(1, 5);
        break;
      default:
        s.idle_time_s = plan.rng.uniform_int(0, 60);
        s.report_count = plan.rng.chance(0.8) ? 0 : plan.rng.uniform_int(1, 2);
        break;
    }
    if (plan.script.report_count) s.report_count = *plan.script.report_count;
    m.players.push_back(std::move(pm));
    truth.rows.push_back({m.match_id, plan.player_id, true_class_of(plan.script)});
  }
  m.key_events = std::move(b.events);
  return {std::move(m), std::move(truth)};
}

namespace {

std::optional<Archetype> mix_archetype(const std::string& key) {
  if (key == "normal") return Archetype::normal_laner;
  if (key == "afk") return Archetype::afk;
  if (key == "feeder") return Archetype::feeder;
  if (key == "dragon_no_show") return Archetype::dragon_no_show;
  if (key == "base_defense_no_show") return Archetype::base_defense_no_show;
  return std::nullopt;
}

}  // namespace

ArchetypeMix parse_mix(std::string_view text) {
  ArchetypeMix mix;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::bad_script, "mix", "expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (!mix_archetype(key)) throw Error(ErrorCode::bad_script, "mix." + key, "unknown archetype '" + key + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::bad_script, "mix." + key, "not a number: '" + item.substr(eq + 1) + "'");
    }
    mix[key] = value;
  }
  return mix;
}

namespace {

bool special(Archetype a) { return a != Archetype::normal_laner && a != Archetype::normal_jungler; }

}  // namespace

Corpus generate_corpus(std::size_t n_matches, const ArchetypeMix& mix, std::uint64_t seed) {
  if (n_matches < 1) throw Error(ErrorCode::bad_script, "n_matches", "n_matches must be >= 1");
  double total = 0.0;
  for (const auto& [key, value] : mix) {
    if (!mix_archetype(key)) throw Error(ErrorCode::bad_script, "mix." + key, "unknown archetype " + key);
    if (value < 0.0) throw Error(ErrorCode::bad_script, "mix." + key, "frequency must be >= 0");
    total += value;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::bad_script, "mix", "frequencies must sum to 1");
  }

  const std::size_t seats = n_matches * kPlayersPerMatch;
  // Largest-remainder apportionment.
  std::vector<std::pair<Archetype, std::size_t>> counts;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (const auto& [key, value] : mix) {
    const double exact = value * static_cast<double>(seats);
    const auto whole = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainders.push_back({exact - static_cast<double>(whole), counts.size()});
    counts.push_back({*mix_archetype(key), whole});
    assigned += whole;
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < seats && i < remainders.size(); ++i, ++assigned) {
    ++counts[remainders[i].second].second;
  }

  Rng rng(detail::derive_seed(seed, 0xC0FFEE));
  std::vector<Archetype> seat_archetypes;
  for (const auto& [a, n] : counts) seat_archetypes.insert(seat_archetypes.end(), n, a);
  seat_archetypes.resize(seats, Archetype::normal_laner);
  rng.shuffle(seat_archetypes);

  // At most two scripted special behaviors per team so that every dragon
  // fight and base push has enough active players.
  const std::size_t teams = n_matches * 2;
  auto team_specials = [&](std::size_t team) {
    std::size_t n = 0;
    for (std::size_t s = team * kPlayersPerTeam; s < (team + 1) * kPlayersPerTeam; ++s) n += special(seat_archetypes[s]);
    return n;
  };
  for (std::size_t team = 0; team < teams; ++team) {
    for (std::size_t s = team * kPlayersPerTeam; s < (team + 1) * kPlayersPerTeam && team_specials(team) > 2; ++s) {
      if (!special(seat_archetypes[s])) continue;
      for (std::size_t other = 0; other < teams; ++other) {
        if (other == team || team_specials(other) >= 2) continue;
        bool moved = false;
        for (std::size_t o = other * kPlayersPerTeam; o < (other + 1) * kPlayersPerTeam; ++o) {
          if (!special(seat_archetypes[o])) {
            std::swap(seat_archetypes[s], seat_archetypes[o]);
            moved = true;
            break;
          }
        }
        if (moved) break;
      }
    }
  }

  // Recurring players so history cohorts are non-trivial.
  const std::size_t pool_size = std::max<std::size_t>(kPlayersPerMatch * 2, seats / 3);
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < pool_size; ++i) {
    std::ostringstream id;
    id << "P" << std::setfill('0') << std::setw(5) << (i + 1);
    pool.push_back(id.str());
  }

  const int width = std::max(4, static_cast<int>(std::to_string(n_matches).size()));
  Corpus corpus;
  for (std::size_t mi = 0; mi < n_matches; ++mi) {
    std::vector<BehaviorScript> scripts(kPlayersPerMatch);
    for (std::size_t p = 0; p < kPlayersPerMatch; ++p) {
      const Archetype a = seat_archetypes[mi * kPlayersPerMatch + p];
      BehaviorScript& s = scripts[p];
      s.archetype = a;
      if (a == Archetype::normal_laner && kSlotLanes[p % kPlayersPerTeam] == Lane::jungle) {
        s.archetype = Archetype::normal_jungler;
      }
      if (a == Archetype::afk) s.idle_span_s = rng.uniform_int(150, 600);
      if (a == Archetype::feeder) s.suspected_deaths = rng.uniform_int(3, 6);
      s.seed = rng.next();
    }
    std::vector<std::string> picked = pool;
    rng.shuffle(picked);
    picked.resize(kPlayersPerMatch);

    MatchOptions opts;
    std::ostringstream id;
    id << "m" << std::setfill('0') << std::setw(width) << (mi + 1);
    opts.match_id = id.str();
    opts.ended_at = 1700000000 + static_cast<std::int64_t>(mi) * 1800 + rng.uniform_int(0, 600);
    opts.player_ids = picked;
    const std::int64_t duration = 60 * rng.uniform_int(15, 30);
    auto [match, truth] = generate_match(scripts, duration, detail::derive_seed(seed, mi + 1), opts);
    corpus.matches.push_back(std::move(match));
    corpus.truth.insert(corpus.truth.end(), truth.rows.begin(), truth.rows.end());
  }
  return corpus;
}

std::string ground_truth_line(const GroundTruthRow& row) {
  nlohmann::ordered_json j;
  j["match_id"] = row.match_id;
  j["player_id"] = row.player_id;
  j["true_class"] = to_string(row.true_class);
  return j.dump();
}

std::vector<GroundTruthRow> read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, path.string(), "cannot open " + path.string());
  std::vector<GroundTruthRow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto c = parse_true_class(j.at("true_class").get<std::string>());
      if (!c) throw std::invalid_argument("true_class");
      out.push_back({j.at("match_id").get<std::string>(), j.at("player_id").get<std::string>(), *c});
    } catch (const std::exception& e) {
      throw Error(ErrorCode::malformed_document, path.string() + ":" + std::to_string(line_no),
                  "bad ground-truth row at line " + std::to_string(line_no));
    }
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& corpus_path,
                  const std::filesystem::path& truth_path) {
  std::ofstream out(corpus_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, corpus_path.string(), "cannot write " + corpus_path.string());
  for (const auto& m : corpus.matches) out << serialize_match(m) << '\n';
  std::ofstream truth(truth_path, std::ios::binary | std::ios::trunc);
  if (!truth) throw Error(ErrorCode::io_failure, truth_path.string(), "cannot write " + truth_path.string());
  for (const auto& row : corpus.truth) truth << ground_truth_line(row) << '\n';
  if (!out || !truth) throw Error(ErrorCode::io_failure, corpus_path.string(), "write failed");
}

std::filesystem::path truth_path_for(const std::filesystem::path& corpus_path) {
  std::filesystem::path p = corpus_path;
  const std::string stem = p.stem().string();
  return p.replace_filename(stem + ".truth.jsonl");
}

}  // namespace actorlens
