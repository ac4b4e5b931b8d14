#pragma once

// Rule-based low-level actor detection: an idle-time threshold for AFK
// players and a suspected-death count for feeders.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "actorlens/telemetry.hpp"

namespace actorlens {

struct DetectorConfig {
  std::int64_t afk_threshold_s = 120;
  double feeder_ratio_threshold = 0.4;
  std::int64_t feeder_count_threshold = 3;

  // Throws Error(bad_filter) when a threshold is out of range.
  void validate() const;
};

enum class DeathReason : std::uint8_t { turret_diving, overextending, disguise_resistance };

std::string_view to_string(DeathReason reason);

struct DeathVerdict {
  bool turret_diving = false;
  bool overextending = false;
  bool disguise_resistance = false;

  bool suspected() const { return turret_diving || overextending || disguise_resistance; }
  std::vector<DeathReason> reasons() const;
};

bool is_afk_actor(std::int64_t idle_time_s, const DetectorConfig& cfg = {});

// The two damage-pattern branches are evaluated independently, so a death
// may carry several reasons. The ratio branch is skipped when the victim
// received no hero or turret damage.
DeathVerdict classify_death(const DeathRecord& death, const DetectorConfig& cfg = {});

std::int64_t suspected_death_count(std::span<const DeathRecord> deaths, const DetectorConfig& cfg = {});
bool is_feeder(std::span<const DeathRecord> deaths, const DetectorConfig& cfg = {});

// Deaths of `player_id` recorded in the match, in event order.
std::vector<DeathRecord> deaths_of(const MatchRecord& match, std::string_view player_id);

enum class LowLevelReason : std::uint8_t { afk, feeder };

std::string_view to_string(LowLevelReason reason);

struct DetectionRow {
  std::string match_id;
  std::string player_id;
  bool afk = false;
  bool feeder = false;
  std::int64_t idle_time_s = 0;
  std::int64_t suspected_death_count = 0;

  bool low_level() const { return afk || feeder; }
  std::vector<LowLevelReason> reasons() const;
};

struct LowLevelPartition {
  // Every player-match, ordered by (match_id, player_id).
  std::vector<DetectionRow> rows;

  std::vector<DetectionRow> low_level() const;
  std::vector<MemberKey> remaining() const;
};

DetectionRow detect_player(const MatchRecord& match, std::size_t player_index,
                           const DetectorConfig& cfg = {});
LowLevelPartition filter_low_level(std::span<const MatchRecord> matches, const DetectorConfig& cfg = {});

// One JSON Lines row of the detection report, thresholds included.
std::string detection_report_line(const DetectionRow& row, const DetectorConfig& cfg);

}  // namespace actorlens
