#pragma once

// The 43-component per-player feature vector the recommender trains on.
// Component order and names are frozen.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "actorlens/telemetry.hpp"

namespace actorlens {

inline constexpr std::size_t kFeatureCount = 43;

using FeatureVector = std::array<double, kFeatureCount>;

const std::array<std::string_view, kFeatureCount>& feature_names();
std::optional<std::size_t> feature_index(std::string_view name);

// assassin=0 fighter=1 mage=2 marksman=3 support=4 tank=5, anything else 6.
std::int64_t hero_type_code(std::string_view hero_type);

// Throws Error(unknown_player).
FeatureVector extract_features(const MatchRecord& match, std::string_view player_id);
FeatureVector extract_features(const MatchRecord& match, std::size_t player_index);

}  // namespace actorlens
