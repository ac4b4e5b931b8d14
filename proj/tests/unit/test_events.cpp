#include <cmath>

#include "actorlens/events.hpp"
#include "actorlens/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actorlens;
using testsupport::add_from;
using testsupport::blank_match;

namespace {

KeyEvent death_event(std::int64_t t, const std::string& victim, const std::string& killer) {
  KeyEvent e;
  e.timestamp_s = t;
  e.kind = KeyEventKind::death;
  e.team = Team::red;
  e.principal = killer;
  e.position = {0.5, 0.5};
  DeathRecord d;
  d.victim = victim;
  d.player_to_hero = 100;
  d.hero_to_player = 300;
  d.hero_number_to_player = 1;
  e.death = d;
  return e;
}

// Puts P0, P1 (blue) and P5, P6 (red) in a tight group at sample k.
void gather(MatchRecord& m, std::size_t k) {
  auto& pos = m.movement[k].positions;
  pos[0] = {0.50, 0.50};
  pos[1] = {0.52, 0.50};
  pos[5] = {0.50, 0.53};
  pos[6] = {0.53, 0.53};
}

}  // namespace

TEST_CASE("ranks are a bijection in the listed order") {
  for (std::size_t r = 0; r < kEventKindCount; ++r) {
    CHECK(rank(kAllEventKinds[r]) == r);
    CHECK(parse_event_kind(to_string(kAllEventKinds[r])) == kAllEventKinds[r]);
  }
  CHECK_FALSE(parse_event_kind("dancing"));
}

TEST_CASE("priority event examples") {
  EventKindSet s;
  s.insert(EventKind::death);
  s.insert(EventKind::minion_killing);
  CHECK(priority_event(s) == EventKind::death);
  CHECK(priority_event(EventKindSet(1u << 8)) == EventKind::inaction);
  CHECK(priority_event(EventKindSet(0x1FF)) == EventKind::turret_destruction);
  CHECK(priority_event(EventKindSet()) == EventKind::inaction);
}

TEST_CASE("priority event agrees with the rank-scan oracle on every subset") {
  for (std::uint16_t bits = 1; bits < 512; ++bits) {
    CHECK(priority_event(EventKindSet(bits)) == testsupport::oracle::first_by_rank(bits));
  }
}

TEST_CASE("death plus minion gold in one minute") {
  MatchRecord m = blank_match(600);
  m.key_events.push_back(death_event(150, "P2", "P7"));
  add_from(m, 2, 7, &PlayerFrame::minion_gold, 60.0);  // frame 7 ends at 160 s, minute 2
  add_from(m, 2, 7, &PlayerFrame::gold, 60.0);
  const auto minutes = abstract_minutes(m, "P2");
  REQUIRE(minutes.size() == 10);
  EventKindSet expect;
  expect.insert(EventKind::death);
  expect.insert(EventKind::minion_killing);
  CHECK(minutes[2].kinds_present == expect);
  CHECK(minutes[2].minion_economy == 60.0);
  CHECK(priority_event(minutes[2]) == EventKind::death);

  const auto killer = abstract_minutes(m, "P7");
  CHECK(killer[2].kinds_present.contains(EventKind::hero_killing));
}

TEST_CASE("a silent minute is inaction") {
  const auto minutes = abstract_minutes(blank_match(600), "P0");
  for (const auto& e : minutes) CHECK(e.kinds_present == EventKindSet(1u << rank(EventKind::inaction)));
}

TEST_CASE("objective assists are contributed-only") {
  MatchRecord m = blank_match(600);
  KeyEvent e;
  e.timestamp_s = 250;
  e.kind = KeyEventKind::dragon_killed;
  e.team = Team::blue;
  e.principal = "P3";
  e.assists = {"P1", "P3"};
  e.position = {0.68, 0.32};
  m.key_events.push_back(e);
  const auto assist = abstract_minutes(m, "P1");
  CHECK(assist[4].kinds_present.contains(EventKind::dragon_killing));
  CHECK(assist[4].contributed_only.contains(EventKind::dragon_killing));
  const auto blow = abstract_minutes(m, "P3");
  CHECK(blow[4].kinds_present.contains(EventKind::dragon_killing));
  CHECK_FALSE(blow[4].contributed_only.contains(EventKind::dragon_killing));
}

TEST_CASE("generated dragon assists show up as contributions") {
  std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  scripts[8] = BehaviorScript::of(Archetype::dragon_no_show);
  const MatchRecord m = generate_match(scripts, 1200, 17).first;
  int checked = 0;
  for (const auto& e : m.key_events) {
    if (e.kind != KeyEventKind::dragon_killed) continue;
    for (const auto& a : e.assists) {
      if (a == e.principal) continue;
      const auto minutes = abstract_minutes(m, a);
      const auto minute = static_cast<std::size_t>(e.timestamp_s / 60);
      CHECK(minutes[minute].kinds_present.contains(EventKind::dragon_killing));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("minute events are consistent with deltas on generated matches") {
  std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  scripts[4] = BehaviorScript::afk(300);
  const MatchRecord m = generate_match(scripts, 1510, 23).first;
  for (std::size_t p = 0; p < 10; ++p) {
    const auto minutes = abstract_minutes(m, p);
    CHECK(minutes.size() == static_cast<std::size_t>(std::ceil(1510 / 60.0)));
    for (const auto& e : minutes) {
      CHECK(e.kinds_present.contains(EventKind::monster_killing) == (e.monster_economy > 0));
      CHECK(e.kinds_present.contains(EventKind::minion_killing) == (e.minion_economy > 0));
      CHECK(e.kinds_present.contains(EventKind::poke) == (e.poke_damage > 0));
      const bool only_inaction = e.kinds_present == EventKindSet(1u << rank(EventKind::inaction));
      CHECK(e.kinds_present.contains(EventKind::inaction) == only_inaction);
    }
  }
}

TEST_CASE("team combat over samples 300..330") {
  MatchRecord m = blank_match(900);
  for (std::size_t k = 30; k <= 33; ++k) gather(m, k);
  add_from(m, 0, 15, &PlayerFrame::damage_to_hero, 200.0);
  add_from(m, 5, 16, &PlayerFrame::damage_to_hero, 150.0);
  const auto combats = detect_team_combats(m);
  REQUIRE(combats.size() == 1);
  CHECK(combats[0].start_s == 300);
  CHECK(combats[0].end_s == 340);
  CHECK(combats[0].participants == std::vector<std::string>{"P0", "P1", "P5", "P6"});
}

TEST_CASE("proximity without damage is not a combat") {
  MatchRecord m = blank_match(900);
  for (std::size_t k = 30; k <= 33; ++k) gather(m, k);
  CHECK(detect_team_combats(m).empty());
  CHECK(proximity_group(m, 30).has_value());
}

TEST_CASE("teams kept apart never fight") {
  MatchRecord m = blank_match(900);
  for (std::size_t p = 0; p < 10; ++p) add_from(m, p, 0, &PlayerFrame::damage_to_hero, 10.0 * (1 + p));
  for (const auto& s : m.movement) {
    for (std::size_t b = 0; b < 5; ++b) {
      for (std::size_t r = 5; r < 10; ++r) CHECK(distance(s.positions[b], s.positions[r]) >= 0.5);
    }
  }
  CHECK(detect_team_combats(m).empty());
}

TEST_CASE("a single missing sample is bridged, two are not") {
  MatchRecord m = blank_match(900);
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    m.frames[f].per_player[0].damage_to_hero = 25.0 * static_cast<double>(f + 1);
  }
  for (std::size_t k : {30u, 31u, 33u, 34u}) gather(m, k);
  auto combats = detect_team_combats(m);
  REQUIRE(combats.size() == 1);
  CHECK(combats[0].start_s == 300);
  CHECK(combats[0].end_s == 350);

  MatchRecord split = m;
  split.movement[33] = m.movement[0];
  gather(split, 35);
  combats = detect_team_combats(split);
  REQUIRE(combats.size() == 2);
  CHECK(combats[0].end_s == 320);
  CHECK(combats[1].start_s == 340);
}

TEST_CASE("generated combats never overlap and span at least 10 s") {
  std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  scripts[7] = BehaviorScript::of(Archetype::dragon_no_show);
  const MatchRecord m = generate_match(scripts, 1500, 31).first;
  const auto combats = detect_team_combats(m);
  CHECK_FALSE(combats.empty());
  for (std::size_t i = 0; i < combats.size(); ++i) {
    CHECK(combats[i].end_s - combats[i].start_s >= 10);
    if (i > 0) CHECK(combats[i - 1].end_s <= combats[i].start_s);
  }
}
