#pragma once

// Cohorts for the progression view: lasso selections, a player's match
// history, or other players on the same hero. Summaries are per-minute box
// statistics of economic difference and priority-event distributions/flows.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actorlens/events.hpp"
#include "actorlens/telemetry.hpp"

namespace actorlens {

enum class CohortMode : std::uint8_t { lasso, history, hero };

std::string_view to_string(CohortMode mode);
std::optional<CohortMode> parse_cohort_mode(std::string_view text);

struct Cohort {
  CohortMode mode = CohortMode::lasso;
  std::vector<MemberKey> members;
  std::optional<MemberKey> anchor;
};

// What build_cohort needs to know about each stored player-match.
struct MemberInfo {
  MemberKey key;
  std::string hero_id;
  std::int64_t ended_at = 0;
};

inline constexpr std::size_t kDefaultHistoryLimit = 20;

// lasso: the selection, sorted and deduplicated; every pair must be in the
//   catalog (Error unknown_member), empty selection is Error empty_selection.
// history: the anchor player's matches by ended_at descending (ties by
//   match_id), at most history_limit, anchor included.
// hero: every other player's matches on the anchor's hero.
// Anchors missing from the catalog raise Error unknown_anchor.
Cohort build_cohort(CohortMode mode, const std::optional<MemberKey>& anchor, std::span<const MemberKey> selection,
                    std::span<const MemberInfo> catalog, std::size_t history_limit = kDefaultHistoryLimit);

struct BoxStats {
  std::int64_t minute_index = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

// Tukey hinges: q1/q3 are medians of the lower/upper halves, the median
// belonging to both halves when the count is odd. values must be non-empty.
BoxStats tukey_box(std::int64_t minute_index, std::vector<double> values);

using KindCounts = std::array<std::int64_t, kEventKindCount>;
using KindShares = std::array<double, kEventKindCount>;

struct MinuteDistribution {
  std::int64_t minute_index = 0;
  std::int64_t members = 0;
  KindCounts counts{};
  KindShares shares{};
};

// Transitions between minute t and t+1 over members present at both.
struct MinuteFlow {
  std::int64_t minute_index = 0;
  std::int64_t members = 0;
  std::array<KindCounts, kEventKindCount> counts{};
  std::array<KindShares, kEventKindCount> shares{};
};

struct FlowSummary {
  std::vector<MinuteDistribution> distributions;
  std::vector<MinuteFlow> flows;
};

// Per-member inputs: one entry per minute the member's match has.
struct MemberSeries {
  MemberKey key;
  std::vector<double> economic_difference;
  std::vector<EventKind> priority;
};

MemberSeries member_series(const MatchRecord& match, std::size_t player_index);

struct ProgressionSummary {
  std::vector<BoxStats> economic_difference;
  FlowSummary flow;
};

ProgressionSummary progression_summary(std::span<const MemberSeries> members);

// Members whose priority event is e1 at minute t and e2 at minute t+1.
std::vector<MemberKey> filter_by_flow(std::span<const MemberSeries> members, std::int64_t t, EventKind e1,
                                      EventKind e2);

}  // namespace actorlens
