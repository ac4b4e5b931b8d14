#include <fstream>
#include <map>
#include <sstream>

#include "actorlens/detect.hpp"
#include "actorlens/error.hpp"
#include "actorlens/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actorlens;
namespace oracle = testsupport::oracle;

namespace {

std::vector<BehaviorScript> normals() { return std::vector<BehaviorScript>(10, BehaviorScript::normal()); }

// Suspected deaths of a player counted with the test oracle.
std::int64_t oracle_suspected(const MatchRecord& m, const std::string& player) {
  std::int64_t n = 0;
  for (const auto& e : m.key_events) {
    if (e.kind != KeyEventKind::death || !e.death || e.death->victim != player) continue;
    const DeathRecord& d = *e.death;
    if (!oracle::death_reasons(d.player_to_hero, d.player_to_turret, d.hero_to_player, d.turret_to_player,
                               d.hero_number_to_player, d.dead_in_turret)
             .empty()) {
      ++n;
    }
  }
  return n;
}

ErrorCode script_error(std::vector<BehaviorScript> scripts, std::int64_t duration = 1200) {
  try {
    generate_match(scripts, duration, 1);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_failure;
}

}  // namespace

TEST_CASE("normal scripts plant nothing") {
  auto [m, truth] = generate_match(normals(), 1200, 7);
  CHECK(validate_match(m).empty());
  REQUIRE(truth.rows.size() == 10);
  for (const auto& p : m.players) {
    CHECK(p.summary.idle_time_s < 120);
    CHECK(oracle_suspected(m, p.player_id) == 0);
  }
  for (const auto& r : truth.rows) CHECK(r.true_class == TrueClass::normal);
}

TEST_CASE("afk idle span passes through") {
  auto scripts = normals();
  scripts[6] = BehaviorScript::afk(150);
  auto [m, truth] = generate_match(scripts, 1200, 3);
  CHECK(validate_match(m).empty());
  CHECK(m.players[6].summary.idle_time_s == 150);
  CHECK(truth.rows[6].true_class == TrueClass::low_level_afk);
}

TEST_CASE("feeder plants exactly the scripted suspected deaths") {
  for (std::int64_t k : {1, 3, 4, 6}) {
    auto scripts = normals();
    scripts[2] = BehaviorScript::feeder(k);
    auto [m, truth] = generate_match(scripts, 1500, 100 + static_cast<std::uint64_t>(k));
    CHECK(validate_match(m).empty());
    CHECK(oracle_suspected(m, m.players[2].player_id) == k);
    for (std::size_t p = 0; p < 10; ++p) {
      if (p != 2) CHECK(oracle_suspected(m, m.players[p].player_id) == 0);
    }
    CHECK(truth.rows[2].true_class == (k >= 3 ? TrueClass::low_level_feeder : TrueClass::high_level_actor));
  }
}

TEST_CASE("scripted knobs") {
  auto scripts = normals();
  scripts[1] = BehaviorScript::afk(111);
  scripts[1].report_count = 4;
  auto [m, truth] = generate_match(scripts, 1200, 5);
  CHECK(m.players[1].summary.idle_time_s == 111);
  CHECK(m.players[1].summary.report_count == 4);
  CHECK(truth.rows[1].true_class == TrueClass::high_level_actor);
}

TEST_CASE("generation is deterministic") {
  auto scripts = normals();
  scripts[0] = BehaviorScript::afk(200);
  scripts[9] = BehaviorScript::feeder(3);
  const auto a = generate_match(scripts, 1320, 42).first;
  const auto b = generate_match(scripts, 1320, 42).first;
  const auto c = generate_match(scripts, 1320, 43).first;
  CHECK(serialize_match(a) == serialize_match(b));
  CHECK(serialize_match(a) != serialize_match(c));
}

TEST_CASE("bad scripts are rejected") {
  CHECK(script_error(std::vector<BehaviorScript>(9)) == ErrorCode::bad_script);
  CHECK(script_error(normals(), 100) == ErrorCode::bad_script);
  auto s = normals();
  s[0] = BehaviorScript::afk(5000);
  CHECK(script_error(s) == ErrorCode::bad_script);
  s = normals();
  s[0] = BehaviorScript::feeder(-1);
  CHECK(script_error(s) == ErrorCode::bad_script);
  CHECK_THROWS_AS(parse_mix("normal"), Error);
  CHECK_THROWS_AS(parse_mix("normal=0.5,wizard=0.5"), Error);
}

TEST_CASE("one all-normal match corpus") {
  const Corpus c = generate_corpus(1, parse_mix("normal=1.0"), 9);
  REQUIRE(c.matches.size() == 1);
  REQUIRE(c.truth.size() == 10);
  for (const auto& r : c.truth) CHECK(r.true_class == TrueClass::normal);
}

TEST_CASE("corpus apportions archetypes exactly") {
  const Corpus c = generate_corpus(60, parse_mix("normal=0.8,afk=0.1,feeder=0.1"), 1);
  CHECK(c.matches.size() == 60);
  CHECK(c.truth.size() == 600);
  std::map<TrueClass, int> counts;
  for (const auto& r : c.truth) counts[r.true_class]++;
  CHECK(counts[TrueClass::low_level_afk] == 60);
  CHECK(counts[TrueClass::low_level_feeder] == 60);
  for (const auto& m : c.matches) CHECK(validate_match(m).empty());
}

TEST_CASE("corpus files are byte-identical across runs and the sidecar reads back") {
  testsupport::TempDir dir;
  const auto mix = parse_mix("normal=0.9,afk=0.05,feeder=0.05");
  write_corpus(generate_corpus(6, mix, 21), dir / "a.jsonl", dir / "a.truth.jsonl");
  write_corpus(generate_corpus(6, mix, 21), dir / "b.jsonl", dir / "b.truth.jsonl");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  CHECK(slurp(dir / "a.truth.jsonl") == slurp(dir / "b.truth.jsonl"));
  CHECK(read_ground_truth(dir / "a.truth.jsonl").size() == 60);
  CHECK(truth_path_for("x/corpus.jsonl") == std::filesystem::path("x/corpus.truth.jsonl"));
}
