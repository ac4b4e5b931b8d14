#include <cmath>
#include <numeric>

#include "actorlens/metrics.hpp"
#include "actorlens/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actorlens;
using testsupport::add_from;
using testsupport::blank_match;

namespace {

// Interval i: P0 deals share[i] of blue's hero damage (P1 deals the rest).
MatchRecord damage_share_fixture(const std::vector<double>& share, std::int64_t duration) {
  MatchRecord m = blank_match(duration);
  for (std::size_t i = 0; i < share.size(); ++i) {
    add_from(m, 0, i, &PlayerFrame::damage_to_hero, 100.0 * share[i]);
    add_from(m, 1, i, &PlayerFrame::damage_to_hero, 100.0 * (1.0 - share[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("activeness score examples") {
  CHECK(*activeness_score(50, 1000, 30, 600) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_FALSE(activeness_score(0, 0, 0, 0));
  CHECK(*activeness_score(400, 400, 0, 0) == 1.0);
  CHECK(*activeness_score(0, 0, 30, 60) == 0.5);
}

TEST_CASE("inactive percentage over constant scores") {
  CHECK(inactive_percentage(damage_share_fixture(std::vector<double>(60, 0.05), 1200), 0) == 1.0);
  CHECK(inactive_percentage(damage_share_fixture(std::vector<double>(60, 0.5), 1200), 0) == 0.0);
}

TEST_CASE("39 inactive of 60 defined intervals") {
  std::vector<double> share(60, 0.5);
  for (std::size_t i = 0; i < 39; ++i) share[i] = 0.05;
  CHECK(inactive_percentage(damage_share_fixture(share, 1200), 0) == doctest::Approx(0.65));
  // Three more intervals where nobody on the team gains anything stay out of
  // the denominator.
  CHECK(inactive_percentage(damage_share_fixture(share, 1260), 0) == doctest::Approx(0.65));
}

TEST_CASE("threshold is strict") {
  CHECK(inactive_percentage(damage_share_fixture(std::vector<double>(30, 0.1), 600), 0) == 0.0);
}

TEST_CASE("lowering a defined score below threshold never lowers the percentage") {
  std::vector<double> share(60, 0.5);
  for (std::size_t i = 0; i < 60; i += 7) share[i] = 0.02;
  double prev = inactive_percentage(damage_share_fixture(share, 1200), 0);
  for (std::size_t i = 1; i < 60; i += 5) {
    share[i] = 0.01;
    const double next = inactive_percentage(damage_share_fixture(share, 1200), 0);
    CHECK(next >= prev);
    prev = next;
  }
}

TEST_CASE("kda") {
  CHECK(kda(5, 3, 1) == 4.0);
  CHECK(kda(0, 0, 0) == 0.0);
  CHECK(kda(0, 0, 7) == 0.0);
  for (int d = 0; d < 20; ++d) CHECK(kda(0, 0, d) == 0.0);
}

TEST_CASE("economic difference against the lane opponent") {
  MatchRecord m = blank_match(600);
  // P1 (blue mid) earns 300 per minute, P6 (red mid) 200.
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    const double t = static_cast<double>(std::min<std::int64_t>(20 * (f + 1), 600));
    m.frames[f].per_player[1].gold = 5.0 * t;
    m.frames[f].per_player[6].gold = t * 200.0 / 60.0;
  }
  CHECK(lane_opponent(m, 1) == 6);
  CHECK(lane_opponent(m, 6) == 1);
  const auto series = economic_difference_series(m, "P1");
  REQUIRE(series.size() == 10);
  for (std::size_t i = 0; i < series.size(); ++i) CHECK(series[i] == doctest::Approx(100.0 * (i + 1)));
  const auto back = economic_difference_series(m, "P6");
  for (std::size_t i = 0; i < series.size(); ++i) CHECK(back[i] == -series[i]);
}

TEST_CASE("player who stops farming falls behind") {
  MatchRecord m = blank_match(900);
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    m.frames[f].per_player[0].gold = 100.0 * static_cast<double>(std::min<std::size_t>(f + 1, 9));
    m.frames[f].per_player[5].gold = 80.0 * static_cast<double>(f + 1);
  }
  const auto s = economic_difference_series(m, "P0");
  for (std::size_t i = 4; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
}

TEST_CASE("mirrored opponents have an all-zero series") {
  MatchRecord m = blank_match(600);
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    m.frames[f].per_player[2].gold = 37.0 * static_cast<double>(f);
    m.frames[f].per_player[7].gold = 37.0 * static_cast<double>(f);
  }
  for (double v : economic_difference_series(m, "P2")) CHECK(v == 0.0);
}

TEST_CASE("ambiguous lanes fall back to the roster slot") {
  MatchRecord m = blank_match(600);
  m.players[5].lane = Lane::mid;  // red has two mids, no top
  CHECK(lane_opponent(m, 0) == 5);
  CHECK(lane_opponent(m, 1) == 6);
}

TEST_CASE("an idle player in a busy team is all inaction") {
  MatchRecord m = blank_match(1200);
  for (std::size_t p = 1; p < 5; ++p) {
    for (std::size_t f = 0; f < m.frames.size(); ++f) m.frames[f].per_player[p].gold = 10.0 * (f + 1);
  }
  m.players[0].summary.report_count = 3;
  const MetricVector v = metric_vector(m, "P0");
  CHECK(v.count(EventKind::inaction) == 20);
  CHECK(std::accumulate(v.priority_counts.begin(), v.priority_counts.end(), std::int64_t{0}) == 20);
  CHECK(v.inactive_percentage == 1.0);
  CHECK(v.report_count == 3);
  const auto a = v.as_array();
  CHECK(a[9] == 1.0);
  CHECK(a[10] == 3.0);
}

TEST_CASE("feeder fixture makes death the dominant priority event") {
  std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  scripts[2] = BehaviorScript::feeder(6);
  // Ten minutes with six planted deaths, one per minute at most.
  const MatchRecord m = generate_match(scripts, 600, 14).first;
  const MetricVector v = metric_vector(m, 2);
  CHECK(v.count(EventKind::death) >= 6);
  for (EventKind k : kAllEventKinds) {
    if (k != EventKind::death) CHECK(v.count(EventKind::death) >= v.count(k));
  }
}

TEST_CASE("counts partition the minutes on generated matches") {
  const Corpus c = generate_corpus(5, parse_mix("normal=0.8,afk=0.1,feeder=0.1"), 77);
  for (const auto& m : c.matches) {
    for (std::size_t p = 0; p < 10; ++p) {
      const MetricVector v = metric_vector(m, p);
      CHECK(std::accumulate(v.priority_counts.begin(), v.priority_counts.end(), std::int64_t{0}) ==
            minute_count(m.duration_s));
      CHECK(v.inactive_percentage >= 0.0);
      CHECK(v.inactive_percentage <= 1.0);
      CHECK(v.report_count == m.players[p].summary.report_count);
    }
  }
}

TEST_CASE("metric names double as filter fields") {
  CHECK(metric_names().size() == 11);
  CHECK(metric_index("report_count") == 10u);
  CHECK(metric_index("inactive_percentage") == 9u);
  CHECK(metric_index("death") == 3u);
  CHECK_FALSE(metric_index("kda"));
}
