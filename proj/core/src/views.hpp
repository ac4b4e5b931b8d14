#pragma once

// JSON payload builders behind the HTTP endpoints.

#include <cstdint>
#include <string_view>

#include "actorlens/cohort.hpp"
#include "actorlens/projection.hpp"
#include "actorlens/store.hpp"
#include "json.hpp"

namespace actorlens::views {

using Json = nlohmann::ordered_json;

Json key_json(const MemberKey& key);
Json metrics_json(const MetricVector& m);
Json label_json(const LabelRecord& r);
Json player_row_json(const PlayerRow& row);

// Throws Error(unknown_player) or Error(bad_window).
Json replay(const MatchRecord& match, std::string_view player_id, std::int64_t from_s, std::int64_t to_s);
Json summary(const StoredMatch& stored);
Json profile(const MatchRecord& match, std::string_view player_id);
Json projection(const std::vector<PlayerRow>& rows, const Embedding& embedding, std::uint64_t seed);

struct FlowSelection {
  std::int64_t minute = 0;
  EventKind from = EventKind::inaction;
  EventKind to = EventKind::inaction;
};

Json progression(const Cohort& cohort, const std::vector<MemberSeries>& series,
                 const std::optional<FlowSelection>& selection);

}  // namespace actorlens::views
