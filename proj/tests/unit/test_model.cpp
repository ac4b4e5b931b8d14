#include <algorithm>
#include <set>

#include "actorlens/error.hpp"
#include "actorlens/features.hpp"
#include "actorlens/model.hpp"
#include "actorlens/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actorlens;

namespace {

std::size_t fi(const char* name) { return *feature_index(name); }

// Two blobs split on kills_teams_per.
std::vector<LabeledExample> separable(std::size_t per_class) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    LabeledExample e;
    e.key = {"s", "P" + std::to_string(i)};
    const bool actor = i % 2 == 1;
    for (std::size_t k = 0; k < kFeatureCount; ++k) e.features[k] = static_cast<double>((i * 7 + k * 13) % 50);
    e.features[fi("kills_teams_per")] = actor ? 0.05 * static_cast<double>(i % 3) : 0.5 + 0.01 * static_cast<double>(i);
    e.label = actor ? Label::actor : Label::normal;
    out.push_back(e);
  }
  return out;
}

const Classifier& as_classifier(const TrainResult& r) {
  REQUIRE(std::holds_alternative<Classifier>(r));
  return std::get<Classifier>(r);
}

}  // namespace

TEST_CASE("feature names are frozen") {
  const std::vector<std::string> expect{
      "gametime", "playerproficiencylv", "playerherotype", "grade", "roleelo", "dmgtotal", "dmgtohero",
      "towerhurt", "rcvdmgfromall", "rcvdmgfromhero", "rcvdmgfromother", "kills", "die", "assistant", "coin",
      "playermonsterkillcoin", "moneyforkill", "playersoldierkillcoin", "killsoldiers", "battleresult",
      "surrendertimes", "healthyrecall", "equiptotalbuy", "playeroffline", "playerreconnection", "skillusetimes",
      "skillmisstimes", "playerkilllittledragoncnt", "playerkillbigdragoncnt", "killbluebuff", "killredbuff",
      "triplekill", "fourkill", "fivekill", "playervisiblewardcount", "idle_time", "dmgtohero_teams_per",
      "kills_teams_per", "die_teams_per", "assistant_teams_per", "coin_teams_per", "idle_time_per", "tower_dead"};
  REQUIRE(feature_names().size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(feature_names()[i] == expect[i]);
}

TEST_CASE("team ratio features") {
  MatchRecord m = testsupport::blank_match(1200);
  m.players[0].summary.kills = 4;
  m.players[2].summary.kills = 6;
  m.players[6].summary.kills = 9;  // other team
  m.players[0].summary.idle_time_s = 111;
  const FeatureVector f = extract_features(m, "P0");
  CHECK(f[fi("kills_teams_per")] == doctest::Approx(0.4));
  CHECK(f[fi("idle_time_per")] == doctest::Approx(0.0925));
  CHECK(f[fi("idle_time")] == 111.0);
  CHECK(f[fi("gametime")] == 1200.0);
  CHECK_THROWS_AS(extract_features(m, "nobody"), Error);
}

TEST_CASE("an all-zero player") {
  const MatchRecord m = testsupport::blank_match(900);
  const FeatureVector f = extract_features(m, "P9");
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const auto name = feature_names()[k];
    if (name == "gametime" || name == "playerherotype" || name == "battleresult") continue;
    CHECK_MESSAGE(f[k] == 0.0, name);
  }
  CHECK(f[fi("playerherotype")] == static_cast<double>(hero_type_code("support")));
}

TEST_CASE("hero type codebook") {
  CHECK(hero_type_code("assassin") == 0);
  CHECK(hero_type_code("tank") == 5);
  CHECK(hero_type_code("") == 6);
  CHECK(hero_type_code("bard") == 6);
}

TEST_CASE("ratio features stay in the unit interval on generated matches") {
  const Corpus c = generate_corpus(4, parse_mix("normal=0.8,afk=0.1,feeder=0.1"), 3);
  for (const auto& m : c.matches) {
    for (std::size_t p = 0; p < 10; ++p) {
      const FeatureVector f = extract_features(m, p);
      CHECK(f == extract_features(m, p));
      for (const char* r : {"dmgtohero_teams_per", "kills_teams_per", "die_teams_per", "assistant_teams_per",
                            "coin_teams_per", "idle_time_per"}) {
        CHECK(f[fi(r)] >= 0.0);
        CHECK(f[fi(r)] <= 1.0);
      }
    }
  }
}

TEST_CASE("tower deaths count deaths under a turret") {
  std::vector<BehaviorScript> scripts(10, BehaviorScript::normal());
  scripts[1] = BehaviorScript::feeder(4);  // variants alternate, two of four die under the turret
  const MatchRecord m = generate_match(scripts, 1200, 9).first;
  std::int64_t expect = 0;
  for (const auto& e : m.key_events) {
    if (e.death && e.death->victim == m.players[1].player_id && e.death->dead_in_turret) ++expect;
  }
  CHECK(expect >= 2);
  CHECK(extract_features(m, 1)[fi("tower_dead")] == static_cast<double>(expect));
}

TEST_CASE("too few labels of one class") {
  auto ex = separable(10);
  std::vector<LabeledExample> few;
  std::size_t actors = 0;
  for (const auto& e : ex) {
    if (e.label == Label::actor && actors++ >= 2) continue;
    few.push_back(e);
  }
  const TrainResult r = train(few);
  REQUIRE(std::holds_alternative<InsufficientLabels>(r));
  CHECK(std::get<InsufficientLabels>(r).actor == 2);
  CHECK(std::get<InsufficientLabels>(r).normal == 10);
  CHECK(std::holds_alternative<InsufficientLabels>(train({})));
}

TEST_CASE("separable labels are fit exactly") {
  const auto ex = separable(30);
  const TrainResult trained = train(ex);
  const Classifier& c = as_classifier(trained);
  for (const auto& e : ex) {
    const auto [label, p] = c.classify(e.features);
    CHECK(label == e.label);
    CHECK(p >= 0.5);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("training and prediction are deterministic") {
  const auto ex = testsupport::threshold_feature_corpus(8, 40);
  const auto probe = testsupport::threshold_feature_corpus(9, 25);
  const TrainResult a = train(ex);
  const TrainResult b = train(ex);
  std::vector<PredictionTarget> targets;
  for (const auto& e : probe) targets.push_back({e.key, e.features});
  const auto pa = predict(as_classifier(a), targets, {}, 5);
  const auto pb = predict(as_classifier(b), targets, {}, 5);
  CHECK(pa == pb);
}

TEST_CASE("held-out accuracy on threshold-labeled features") {
  const auto all = testsupport::threshold_feature_corpus(2024, 60);
  const std::vector<LabeledExample> training(all.begin(), all.begin() + 40);
  const TrainResult trained = train(training);
  const Classifier& c = as_classifier(trained);
  int correct = 0;
  for (auto it = all.begin() + 40; it != all.end(); ++it) correct += c.classify(it->features).first == it->label;
  CHECK(correct >= 18);
}

TEST_CASE("prediction records") {
  const auto ex = separable(10);
  const TrainResult trained = train(ex);
  const Classifier& c = as_classifier(trained);
  CHECK(predict(c, {}, {}, 1).empty());

  std::vector<PredictionTarget> targets;
  for (const auto& e : ex) targets.push_back({e.key, e.features});
  const std::set<MemberKey> human{ex[0].key, ex[3].key};
  const auto out = predict(c, targets, human, 1700000000);
  CHECK(out.size() == ex.size() - 2);
  for (const auto& r : out) {
    CHECK(human.count(r.key()) == 0);
    CHECK(r.source == LabelSource::model);
    CHECK(r.confidence >= 0.5);
    CHECK(r.confidence <= 1.0);
    CHECK(r.created_at == 1700000000);
  }
  // A duplicate of a labeled actor is called an actor.
  const auto dup = predict(c, std::vector<PredictionTarget>{{{"dup", "P1"}, ex[1].features}}, {}, 1);
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].label == Label::actor);
}

TEST_CASE("label vocabulary") {
  CHECK(parse_label("actor") == Label::actor);
  CHECK(parse_label("normal") == Label::normal);
  CHECK_FALSE(parse_label("afk"));
  CHECK(parse_label_source("model") == LabelSource::model);
  CHECK_FALSE(parse_label_source("robot"));
  CHECK(format_timestamp(0) == "1970-01-01T00:00:00Z");
  CHECK(format_timestamp(1700000000) == "2023-11-14T22:13:20Z");
}
