#pragma once

// Synthetic match generator with scripted behavior archetypes and a
// ground-truth sidecar.
//
// Roster slots 0..4 are blue, 5..9 red; within a team the slots play top,
// mid, bottom, jungle, support. Everything is a deterministic function of
// the scripts, duration and seed.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "actorlens/telemetry.hpp"

namespace actorlens {

enum class Archetype : std::uint8_t {
  normal_laner,
  normal_jungler,
  afk,
  feeder,
  dragon_no_show,
  base_defense_no_show,
};

std::string_view to_string(Archetype archetype);

struct BehaviorScript {
  Archetype archetype = Archetype::normal_laner;
  // afk: summary idle time written verbatim.
  std::int64_t idle_span_s = 0;
  // feeder: deaths scripted to satisfy a suspected-death branch.
  std::int64_t suspected_deaths = 0;
  // afk: seconds spent passive in the highland from match start;
  // defaults to idle_span_s.
  std::optional<std::int64_t> passive_s;
  std::optional<std::int64_t> report_count;
  std::uint64_t seed = 0;

  static BehaviorScript normal() { return {}; }
  static BehaviorScript afk(std::int64_t idle_span_s) {
    BehaviorScript s;
    s.archetype = Archetype::afk;
    s.idle_span_s = idle_span_s;
    return s;
  }
  static BehaviorScript feeder(std::int64_t suspected_deaths) {
    BehaviorScript s;
    s.archetype = Archetype::feeder;
    s.suspected_deaths = suspected_deaths;
    return s;
  }
  static BehaviorScript of(Archetype archetype) {
    BehaviorScript s;
    s.archetype = archetype;
    return s;
  }
};

enum class TrueClass : std::uint8_t { normal, low_level_afk, low_level_feeder, high_level_actor };

std::string_view to_string(TrueClass c);
std::optional<TrueClass> parse_true_class(std::string_view text);

// Ground truth under the default detector thresholds.
TrueClass true_class_of(const BehaviorScript& script);

struct GroundTruthRow {
  std::string match_id;
  std::string player_id;
  TrueClass true_class = TrueClass::normal;
};

struct SynthGroundTruth {
  std::vector<GroundTruthRow> rows;
};

struct MatchOptions {
  std::string match_id;               // default: derived from seed
  std::int64_t ended_at = 0;
  std::vector<std::string> player_ids;  // 10 entries or empty
  std::vector<std::string> hero_ids;    // 10 entries or empty
};

// Dragon fight time scripted for a dragon_no_show team, and the pit.
std::int64_t scripted_dragon_fight_time(std::int64_t duration_s);
Point dragon_pit();

// Throws Error(bad_script) for parameters out of range.
std::pair<MatchRecord, SynthGroundTruth> generate_match(std::span<const BehaviorScript> scripts,
                                                        std::int64_t duration_s, std::uint64_t seed,
                                                        const MatchOptions& options = {});

struct Corpus {
  std::vector<MatchRecord> matches;
  std::vector<GroundTruthRow> truth;
};

// Keys: normal, afk, feeder, dragon_no_show, base_defense_no_show.
using ArchetypeMix = std::map<std::string, double>;

// "normal=0.8,afk=0.1,feeder=0.1". Throws Error(bad_script).
ArchetypeMix parse_mix(std::string_view text);

// Seats are apportioned exactly (largest remainder over n_matches * 10).
Corpus generate_corpus(std::size_t n_matches, const ArchetypeMix& mix, std::uint64_t seed);

std::string ground_truth_line(const GroundTruthRow& row);
std::vector<GroundTruthRow> read_ground_truth(const std::filesystem::path& path);

// Writes the telemetry JSON Lines corpus and the ground-truth sidecar.
// Throws Error(io_failure).
void write_corpus(const Corpus& corpus, const std::filesystem::path& corpus_path,
                  const std::filesystem::path& truth_path);

// Sidecar path used by the CLI: "x.jsonl" -> "x.truth.jsonl".
std::filesystem::path truth_path_for(const std::filesystem::path& corpus_path);

}  // namespace actorlens
