#pragma once

// Shared fixtures and independent oracles for the test binaries. The oracles
// restate the rules from scratch and must not call the code under test.

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <random>

#include "actorlens/cohort.hpp"
#include "actorlens/detect.hpp"
#include "actorlens/events.hpp"
#include "actorlens/model.hpp"
#include "actorlens/projection.hpp"
#include "actorlens/synth.hpp"
#include "actorlens/telemetry.hpp"

namespace testsupport {

// Valid 10-player match: everyone parked at their base, all counters zero.
actorlens::MatchRecord blank_match(std::int64_t duration_s, const std::string& match_id = "fixture");

// Adds `amount` to a cumulative PlayerFrame field from frame `from` onward.
template <typename Field>
void add_from(actorlens::MatchRecord& m, std::size_t player, std::size_t from, Field field, double amount) {
  for (std::size_t f = from; f < m.frames.size(); ++f) {
    auto& pf = m.frames[f].per_player[player];
    pf.*field += static_cast<std::remove_reference_t<decltype(pf.*field)>>(amount);
  }
}

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// One JSON line per match.
std::string corpus_text(const std::vector<actorlens::MatchRecord>& matches);

// Every file under `root` mapped to its bytes, keyed by relative path.
std::string snapshot(const std::filesystem::path& root);

namespace oracle {

// The exhaustive damage grid: four damage levels per field, hero counts
// {0,1,2,3,5}, both turret flags, minus rows where no hero damage comes with
// a hero count. 2560 candidate combinations.
std::vector<actorlens::DeathRecord> death_grid();

// Branch-by-branch restatement of the death rules. Returns the reasons as
// strings in a set.
std::set<std::string> death_reasons(double p2h, double p2t, double h2p, double t2p, std::int64_t heroes,
                                    bool in_turret, double ratio = 0.4);

// First present kind scanning ranks 0..8; inaction when empty.
actorlens::EventKind first_by_rank(std::uint16_t bits);

struct Hinges {
  double min, q1, median, q3, max;
};

// Tukey hinges from median and hinge depths.
Hinges tukey(std::vector<double> values);

}  // namespace oracle

// Members with random lengths (1..30 minutes), priority sequences drawn
// from a skewed kind distribution and integer-valued economic differences
// so ties are common.
std::vector<actorlens::MemberSeries> random_cohort(std::mt19937_64& rng, std::size_t members);

// Feature vectors with plausible magnitudes whose class is a threshold
// rule: actor iff idle_time_per >= 0.1 or die_teams_per >= 0.45.
std::vector<actorlens::LabeledExample> threshold_feature_corpus(std::uint64_t seed, std::size_t n);

// Two tight groups of metric vectors far apart (between/within squared
// distance ratio well above 10). The first `per_cluster` belong to group 0.
std::vector<actorlens::MetricArray> two_clusters(std::mt19937_64& rng, std::size_t per_cluster);

// Fraction of points whose nearest layout neighbour shares their group.
double neighbour_recall(const std::vector<actorlens::Point>& layout, const std::vector<int>& group);

// Misassignments of a 2-means clustering of the layout against `group`,
// minimised over the label swap.
std::size_t two_means_errors(const std::vector<actorlens::Point>& layout, const std::vector<int>& group);

double min_pairwise_distance(const std::vector<actorlens::Point>& layout);

// Recounts distributions and flows from the raw sequences and checks
// normalization, marginals and box stats. Empty when everything matches,
// otherwise a description of the first mismatch.
std::string cohort_summary_problem(const std::vector<actorlens::MemberSeries>& members,
                                   const actorlens::ProgressionSummary& summary);

}  // namespace testsupport
