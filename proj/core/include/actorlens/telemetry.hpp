#pragma once

// Canonical in-memory model for one match of telemetry and its JSON Lines
// encoding ("actorlens/1").
//
// Time is integer seconds from match start. Map positions are normalized to
// the unit square with the blue base at (0,0) and the red base at (1,1).
//
// Frame i holds cumulative per-player values at min(20*(i+1), duration_s),
// so there are ceil(duration_s / 20) frames and interval i spans
// [20*i, 20*(i+1)). Movement sample k is taken at t = 10*k for
// k = 0..floor(duration_s / 10).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace actorlens {

inline constexpr std::string_view kSchemaVersion = "actorlens/1";
inline constexpr std::int64_t kFrameIntervalS = 20;
inline constexpr std::int64_t kMovementIntervalS = 10;
inline constexpr std::int64_t kMinuteS = 60;
inline constexpr std::size_t kPlayersPerMatch = 10;
inline constexpr std::size_t kPlayersPerTeam = 5;

enum class Team : std::uint8_t { blue, red };
enum class Lane : std::uint8_t { top, mid, bottom, jungle, support };
enum class BattleResult : std::uint8_t { loss, win };

std::string_view to_string(Team team);
std::string_view to_string(Lane lane);
std::string_view to_string(BattleResult result);
std::optional<Team> parse_team(std::string_view text);
std::optional<Lane> parse_lane(std::string_view text);
std::optional<BattleResult> parse_battle_result(std::string_view text);

constexpr Team opponent(Team team) { return team == Team::blue ? Team::red : Team::blue; }

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

struct PlayerProfile {
  std::int64_t proficiency_level = 0;
  std::int64_t grade = 0;
  double elo = 0.0;

  friend bool operator==(const PlayerProfile&, const PlayerProfile&) = default;
};

// Per-player match totals. JSON keys follow the feature-table names
// (dmgtotal, rcvdmgfromhero, ...); see the field table in telemetry.cpp.
struct MatchSummaryStats {
  std::int64_t kills = 0;
  std::int64_t deaths = 0;
  std::int64_t assists = 0;
  double damage_total = 0.0;
  double damage_to_hero = 0.0;
  double damage_to_turret = 0.0;
  double received_from_all = 0.0;
  double received_from_hero = 0.0;
  double received_from_other = 0.0;
  double total_gold = 0.0;
  double monster_gold = 0.0;
  double kill_gold = 0.0;
  double minion_gold = 0.0;
  std::int64_t minions_killed = 0;
  BattleResult battle_result = BattleResult::loss;
  std::int64_t surrender_times = 0;
  std::int64_t healthy_recall = 0;
  std::int64_t equipment_purchases = 0;
  std::int64_t offline_count = 0;
  std::int64_t reconnect_count = 0;
  std::int64_t skill_hits = 0;
  std::int64_t skill_misses = 0;
  std::int64_t dragon_kills = 0;
  std::int64_t baron_kills = 0;
  std::int64_t blue_buff_kills = 0;
  std::int64_t red_buff_kills = 0;
  std::int64_t triple_kills = 0;
  std::int64_t quadra_kills = 0;
  std::int64_t penta_kills = 0;
  std::int64_t visible_wards = 0;
  std::int64_t idle_time_s = 0;
  std::int64_t report_count = 0;

  friend bool operator==(const MatchSummaryStats&, const MatchSummaryStats&) = default;
};

struct PlayerMatch {
  std::string player_id;
  Team team = Team::blue;
  std::string hero_id;
  std::string hero_type;
  Lane lane = Lane::top;
  PlayerProfile profile;
  MatchSummaryStats summary;

  friend bool operator==(const PlayerMatch&, const PlayerMatch&) = default;
};

// Damage exchanged in the window leading up to one death, as exported
// upstream. "player_to_*" is dealt by the victim, "*_to_player" received.
struct DeathRecord {
  std::string victim;
  double player_to_hero = 0.0;
  double player_to_turret = 0.0;
  double hero_to_player = 0.0;
  double turret_to_player = 0.0;
  std::int64_t hero_number_to_player = 0;
  bool dead_in_turret = false;

  friend bool operator==(const DeathRecord&, const DeathRecord&) = default;
};

enum class KeyEventKind : std::uint8_t { death, turret_destroyed, dragon_killed, baron_killed };

std::string_view to_string(KeyEventKind kind);
std::optional<KeyEventKind> parse_key_event_kind(std::string_view text);

// For deaths, `team` is the team credited with the kill and `principal` the
// killing hero ("" when no hero landed the blow). For objectives, `principal`
// landed the final blow and `assists` damaged the objective.
struct KeyEvent {
  std::int64_t timestamp_s = 0;
  KeyEventKind kind = KeyEventKind::death;
  Team team = Team::blue;
  std::string principal;
  std::vector<std::string> assists;
  Point position;
  std::optional<DeathRecord> death;

  friend bool operator==(const KeyEvent&, const KeyEvent&) = default;
};

struct PlayerFrame {
  double gold = 0.0;
  std::int64_t kills = 0;
  std::int64_t deaths = 0;
  std::int64_t assists = 0;
  double damage_to_hero = 0.0;
  double damage_total = 0.0;
  double received_damage = 0.0;
  std::int64_t minions_killed = 0;
  double minion_gold = 0.0;
  double monster_gold = 0.0;

  friend bool operator==(const PlayerFrame&, const PlayerFrame&) = default;
};

// per_player is indexed by roster position (MatchRecord::players).
struct TimeSeriesFrame {
  std::int64_t interval_index = 0;
  std::vector<PlayerFrame> per_player;

  friend bool operator==(const TimeSeriesFrame&, const TimeSeriesFrame&) = default;
};

struct MovementSample {
  std::int64_t timestamp_s = 0;
  std::vector<Point> positions;

  friend bool operator==(const MovementSample&, const MovementSample&) = default;
};

struct MatchRecord {
  std::string schema{kSchemaVersion};
  std::string match_id;
  std::int64_t duration_s = 0;
  std::int64_t ended_at = 0;
  std::vector<PlayerMatch> players;
  std::vector<KeyEvent> key_events;
  std::vector<TimeSeriesFrame> frames;
  std::vector<MovementSample> movement;

  std::optional<std::size_t> index_of(std::string_view player_id) const;
  // Throws Error(unknown_player).
  std::size_t require_index(std::string_view player_id) const;
  const PlayerMatch& player(std::string_view player_id) const {
    return players[require_index(player_id)];
  }

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// One player in one match; the unit that is filtered, projected and labeled.
struct MemberKey {
  std::string match_id;
  std::string player_id;

  friend auto operator<=>(const MemberKey&, const MemberKey&) = default;
};

std::int64_t frame_count(std::int64_t duration_s);
std::int64_t movement_sample_count(std::int64_t duration_s);
std::int64_t minute_count(std::int64_t duration_s);

PlayerFrame operator-(const PlayerFrame& a, const PlayerFrame& b);

// Frame index holding the cumulative values at the end of `minute`.
std::size_t minute_end_frame(const MatchRecord& match, std::size_t minute);

// Differences of the cumulative series. Interval/minute 0 is measured from
// an all-zero start.
PlayerFrame interval_delta(const MatchRecord& match, std::size_t player, std::size_t interval);
PlayerFrame minute_delta(const MatchRecord& match, std::size_t player, std::size_t minute);

// Minute containing second t; t == duration folds into the last minute.
std::size_t minute_of(const MatchRecord& match, std::int64_t t);

struct Violation {
  std::string code;
  std::string path;
  std::string message;
};

// Parses one JSON match object. Throws Error with code malformed_document,
// schema_violation or invariant_violation; the error path names the
// offending field.
MatchRecord parse_match(std::string_view document);

// One compact JSON line (no trailing newline).
std::string serialize_match(const MatchRecord& match);

// Empty iff every structural and numeric invariant holds.
std::vector<Violation> validate_match(const MatchRecord& match);

}  // namespace actorlens
