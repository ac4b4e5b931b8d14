#include <random>

#include "actorlens/cohort.hpp"
#include "actorlens/error.hpp"
#include "actorlens/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actorlens;

namespace {

std::vector<MemberInfo> catalog() {
  // Player X has six matches, hero H1 is shared by X and two others.
  std::vector<MemberInfo> c;
  for (int i = 0; i < 6; ++i) {
    c.push_back({{"m" + std::to_string(i), "X"}, i % 2 ? "H1" : "H2", 1000 + 10 * (i % 3)});
  }
  c.push_back({{"m0", "Y"}, "H1", 1000});
  c.push_back({{"m4", "Z"}, "H1", 1020});
  c.push_back({{"m5", "Z"}, "H3", 1020});
  return c;
}

MemberSeries series(const std::string& id, std::vector<EventKind> priority, std::vector<double> econ = {}) {
  MemberSeries s;
  s.key = {"m", id};
  if (econ.empty()) econ.assign(priority.size(), 0.0);
  s.priority = std::move(priority);
  s.economic_difference = std::move(econ);
  return s;
}

Error error_of(CohortMode mode, std::optional<MemberKey> anchor, std::vector<MemberKey> selection) {
  const auto cat = catalog();
  try {
    build_cohort(mode, anchor, selection, cat);
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error");
  return Error(ErrorCode::io_failure, "", "");
}

}  // namespace

TEST_CASE("lasso cohort is the selection") {
  const auto cat = catalog();
  const std::vector<MemberKey> pick{{"m4", "Z"}, {"m0", "Y"}, {"m1", "X"}, {"m0", "Y"}, {"m2", "X"}};
  const Cohort c = build_cohort(CohortMode::lasso, std::nullopt, pick, cat);
  CHECK(c.members == std::vector<MemberKey>{{"m0", "Y"}, {"m1", "X"}, {"m2", "X"}, {"m4", "Z"}});
  CHECK(error_of(CohortMode::lasso, std::nullopt, {}).code() == ErrorCode::empty_selection);
  CHECK(error_of(CohortMode::lasso, std::nullopt, {{"m9", "X"}}).code() == ErrorCode::unknown_member);
}

TEST_CASE("history cohort follows the anchor player by end time") {
  const auto cat = catalog();
  const Cohort c = build_cohort(CohortMode::history, MemberKey{"m3", "X"}, {}, cat);
  REQUIRE(c.members.size() == 6);
  for (const auto& k : c.members) CHECK(k.player_id == "X");
  // ended_at: m2,m5 = 1020; m1,m4 = 1010; m0,m3 = 1000
  CHECK(c.members == std::vector<MemberKey>{{"m2", "X"}, {"m5", "X"}, {"m1", "X"}, {"m4", "X"}, {"m0", "X"},
                                            {"m3", "X"}});
  const Cohort capped = build_cohort(CohortMode::history, MemberKey{"m3", "X"}, {}, cat, 2);
  CHECK(capped.members == std::vector<MemberKey>{{"m2", "X"}, {"m3", "X"}});
  CHECK(error_of(CohortMode::history, MemberKey{"m3", "Q"}, {}).code() == ErrorCode::unknown_anchor);
  CHECK(error_of(CohortMode::history, std::nullopt, {}).code() == ErrorCode::unknown_anchor);
}

TEST_CASE("hero cohort holds other players on the same hero") {
  const auto cat = catalog();
  const Cohort c = build_cohort(CohortMode::hero, MemberKey{"m1", "X"}, {}, cat);
  CHECK(c.members == std::vector<MemberKey>{{"m0", "Y"}, {"m4", "Z"}});
  CHECK(c.anchor == MemberKey{"m1", "X"});
}

TEST_CASE("mode names round trip") {
  for (auto m : {CohortMode::lasso, CohortMode::history, CohortMode::hero}) CHECK(parse_cohort_mode(to_string(m)) == m);
  CHECK_FALSE(parse_cohort_mode("team"));
}

TEST_CASE("tukey hinges") {
  auto b = tukey_box(3, {7.0});
  CHECK(b.min == 7.0);
  CHECK(b.q1 == 7.0);
  CHECK(b.median == 7.0);
  CHECK(b.q3 == 7.0);
  CHECK(b.max == 7.0);
  b = tukey_box(0, {5, 1, 4, 2, 3});
  CHECK(b.q1 == 2.0);
  CHECK(b.median == 3.0);
  CHECK(b.q3 == 4.0);
  b = tukey_box(0, {1, 2, 3, 4});
  CHECK(b.q1 == 1.5);
  CHECK(b.median == 2.5);
  CHECK(b.q3 == 3.5);
  b = tukey_box(0, {1, 2, 3, 4, 5, 6, 7});
  CHECK(b.q1 == 2.5);
  CHECK(b.q3 == 5.5);
  CHECK(b.count == 7);
}

TEST_CASE("distribution counts a death in half the cohort") {
  std::vector<MemberSeries> c;
  for (int i = 0; i < 4; ++i) {
    std::vector<EventKind> p(14, EventKind::minion_killing);
    if (i < 2) p[12] = EventKind::death;
    c.push_back(series("P" + std::to_string(i), p));
  }
  const auto s = progression_summary(c);
  CHECK(s.flow.distributions[12].shares[rank(EventKind::death)] == 0.5);
  CHECK(testsupport::cohort_summary_problem(c, s).empty());
}

TEST_CASE("identical members give 0/1 flows") {
  std::vector<EventKind> p{EventKind::minion_killing, EventKind::poke, EventKind::death, EventKind::inaction};
  std::vector<MemberSeries> c;
  for (int i = 0; i < 4; ++i) c.push_back(series("P" + std::to_string(i), p));
  const auto s = progression_summary(c);
  for (const auto& f : s.flow.flows) {
    for (const auto& row : f.shares) {
      for (double v : row) CHECK((v == 0.0 || v == 1.0));
    }
  }
}

TEST_CASE("members of different lengths only count where they play") {
  std::vector<MemberSeries> c{series("A", {EventKind::poke, EventKind::poke, EventKind::death}, {1, 2, 3}),
                              series("B", {EventKind::inaction}, {10})};
  const auto s = progression_summary(c);
  REQUIRE(s.flow.distributions.size() == 3);
  CHECK(s.flow.distributions[0].members == 2);
  CHECK(s.flow.distributions[2].members == 1);
  CHECK(s.flow.distributions[2].shares[rank(EventKind::death)] == 1.0);
  REQUIRE(s.flow.flows.size() == 2);
  CHECK(s.flow.flows[0].members == 1);
  CHECK(s.economic_difference[0].median == 5.5);
  CHECK(testsupport::cohort_summary_problem(c, s).empty());
}

TEST_CASE("flow selection") {
  std::vector<MemberSeries> c;
  for (int i = 0; i < 5; ++i) {
    std::vector<EventKind> p(20, EventKind::poke);
    if (i % 2 == 0) p[14] = p[15] = EventKind::minion_killing;
    c.push_back(series("P" + std::to_string(i), p));
  }
  const auto picked = filter_by_flow(c, 14, EventKind::minion_killing, EventKind::minion_killing);
  CHECK(picked == std::vector<MemberKey>{{"m", "P0"}, {"m", "P2"}, {"m", "P4"}});
  CHECK(filter_by_flow(c, 14, EventKind::death, EventKind::poke).empty());
  CHECK(filter_by_flow(c, 19, EventKind::poke, EventKind::poke).empty());

  std::vector<MemberSeries> sub;
  for (const auto& m : c) {
    if (std::find(picked.begin(), picked.end(), m.key) != picked.end()) sub.push_back(m);
  }
  const auto s = progression_summary(sub);
  CHECK(s.flow.distributions[14].shares[rank(EventKind::minion_killing)] == 1.0);
  CHECK(filter_by_flow(sub, 14, EventKind::minion_killing, EventKind::minion_killing) == picked);
}

TEST_CASE("random cohorts satisfy every summary invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = testsupport::random_cohort(rng, 1 + trial % 17);
    CHECK(testsupport::cohort_summary_problem(c, progression_summary(c)) == "");
  }
}

TEST_CASE("member series from a generated match") {
  std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  const MatchRecord m = generate_match(scripts, 1230, 2).first;
  const MemberSeries s = member_series(m, 3);
  CHECK(s.key == MemberKey{m.match_id, m.players[3].player_id});
  CHECK(s.priority.size() == 21);
  CHECK(s.economic_difference.size() == 21);
}
