#pragma once

// Per-minute event abstraction, priority events and team-combat intervals.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actorlens/telemetry.hpp"

namespace actorlens {

// Declaration order is the priority order: rank 0 is the most significant.
enum class EventKind : std::uint8_t {
  turret_destruction,
  dragon_killing,
  hero_killing,
  death,
  assist,
  poke,
  monster_killing,
  minion_killing,
  inaction,
};

inline constexpr std::size_t kEventKindCount = 9;

inline constexpr std::array<EventKind, kEventKindCount> kAllEventKinds{
    EventKind::turret_destruction, EventKind::dragon_killing, EventKind::hero_killing,
    EventKind::death,              EventKind::assist,         EventKind::poke,
    EventKind::monster_killing,    EventKind::minion_killing, EventKind::inaction,
};

constexpr std::size_t rank(EventKind kind) { return static_cast<std::size_t>(kind); }

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

class EventKindSet {
 public:
  constexpr EventKindSet() = default;
  constexpr explicit EventKindSet(std::uint16_t bits) : bits_(bits & kMask) {}

  constexpr void insert(EventKind k) { bits_ |= bit(k); }
  constexpr void erase(EventKind k) { bits_ &= static_cast<std::uint16_t>(~bit(k)); }
  constexpr bool contains(EventKind k) const { return (bits_ & bit(k)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint16_t bits() const { return bits_; }
  std::vector<EventKind> members() const;

  friend constexpr bool operator==(EventKindSet, EventKindSet) = default;

 private:
  static constexpr std::uint16_t kMask = (1u << kEventKindCount) - 1;
  static constexpr std::uint16_t bit(EventKind k) { return static_cast<std::uint16_t>(1u << rank(k)); }
  std::uint16_t bits_ = 0;
};

struct MinuteEvents {
  std::int64_t minute_index = 0;
  EventKindSet kinds_present;
  double poke_damage = 0.0;
  double monster_economy = 0.0;
  double minion_economy = 0.0;
  // turret_destruction / dragon_killing where the player only contributed.
  EventKindSet contributed_only;
};

// Lowest-rank member; inaction for an empty set.
EventKind priority_event(EventKindSet kinds);
inline EventKind priority_event(const MinuteEvents& e) { return priority_event(e.kinds_present); }

// One entry per started minute. Throws Error(unknown_player).
std::vector<MinuteEvents> abstract_minutes(const MatchRecord& match, std::string_view player_id);
std::vector<MinuteEvents> abstract_minutes(const MatchRecord& match, std::size_t player_index);

std::vector<EventKind> priority_sequence(const std::vector<MinuteEvents>& minutes);

struct TeamCombat {
  std::int64_t start_s = 0;
  std::int64_t end_s = 0;
  std::vector<std::string> participants;  // roster order
};

struct TeamCombatConfig {
  double radius = 0.12;
  std::size_t min_per_team = 2;
  std::size_t gap_tolerance = 1;  // non-qualifying samples bridged inside one combat
  std::int64_t min_span_s = 10;
};

// Movement samples qualify when a proximity group holds min_per_team players
// from each team and the group exchanged hero damage in the covering frame.
std::vector<TeamCombat> detect_team_combats(const MatchRecord& match, const TeamCombatConfig& cfg = {});

// Proximity group at movement sample k, if one qualifies on position alone.
std::optional<std::vector<std::size_t>> proximity_group(const MatchRecord& match, std::size_t sample,
                                                        const TeamCombatConfig& cfg = {});

}  // namespace actorlens
