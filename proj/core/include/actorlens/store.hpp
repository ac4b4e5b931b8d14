#pragma once

// On-disk document store for matches, derived caches, labels and sessions,
// with an in-memory index.
//
// Layout under the root directory:
//   matches/<match_id>.json    telemetry document (one JSON Lines record)
//   derived/<match_id>.json    cached metrics, series and features + source hash
//   labels/<match_id>~<player_id>.json   label audit trail for one member
//   sessions/<session_id>.json

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "actorlens/cohort.hpp"
#include "actorlens/features.hpp"
#include "actorlens/metrics.hpp"
#include "actorlens/model.hpp"
#include "actorlens/telemetry.hpp"

namespace actorlens {

struct LineError {
  std::size_t line = 0;
  std::string code;
  std::string path;
  std::string message;
};

struct IngestReport {
  std::size_t matches = 0;
  std::size_t player_matches = 0;
  std::size_t skipped = 0;  // duplicates plus lines that failed to parse
  std::vector<LineError> errors;
};

struct FilterSpec {
  std::string field;
  double lo = 0.0;
  double hi = 0.0;

  // field must be label_status or a metric name; lo <= hi. Throws Error(bad_filter).
  static FilterSpec make(std::string field, double lo, double hi);

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

// "report_count:3:5,inactive_percentage:0.5:0.65"; empty text is no filters.
std::vector<FilterSpec> parse_filters(std::string_view text);

// 0 unlabeled, 1 normal, 2 actor (human labels only).
int label_status(const std::optional<LabelRecord>& human);

struct Session {
  std::string session_id;
  std::vector<MemberKey> focused;
  std::vector<FilterSpec> filters;
  std::vector<MemberKey> lasso;
  std::uint64_t seed = 0;
};

struct PlayerDerived {
  MetricVector metrics;
  MemberSeries series;
  FeatureVector features{};
};

struct StoredMatch {
  std::shared_ptr<const MatchRecord> match;
  std::uint64_t hash = 0;
  std::vector<PlayerDerived> players;  // roster order
};

struct PlayerRow {
  MemberKey key;
  std::string hero_id;
  Team team = Team::blue;
  MetricVector metrics;
  std::optional<LabelRecord> label;       // current human label
  std::optional<LabelRecord> prediction;  // latest model label
};

struct LabelState {
  std::vector<LabelRecord> audit;  // every write, in order

  std::optional<LabelRecord> human() const;
  std::optional<LabelRecord> model() const;
  // Human wins over model.
  std::optional<LabelRecord> effective() const;
};

using Clock = std::function<std::int64_t()>;

std::int64_t system_clock_seconds();

class Store {
 public:
  // Opens (creating if needed) the store rooted at `root`.
  explicit Store(std::filesystem::path root, Clock clock = system_clock_seconds);

  const std::filesystem::path& root() const { return root_; }

  // Per-line failures are collected; IO failures throw Error(io_failure).
  IngestReport ingest_file(const std::filesystem::path& path);
  IngestReport ingest(std::istream& lines);
  IngestReport ingest_text(std::string_view text);

  std::vector<std::string> match_ids() const;
  std::size_t match_count() const;
  // Throws Error(unknown_match).
  StoredMatch match(std::string_view match_id) const;
  bool has_member(const MemberKey& key) const;
  std::vector<MemberKey> all_members() const;
  std::vector<MemberInfo> catalog() const;
  // Throws Error(unknown_member).
  PlayerDerived derived(const MemberKey& key) const;

  // members empty means every stored member. Throws Error(unknown_member).
  Session create_session(const std::vector<MemberKey>& members, bool all, std::uint64_t seed = 0);
  Session session(std::string_view session_id) const;
  Session set_filters(std::string_view session_id, std::vector<FilterSpec> filters);
  Session set_lasso(std::string_view session_id, std::vector<MemberKey> members);

  // Focused members passing every filter, ordered by key.
  std::vector<PlayerRow> query_players(std::string_view session_id, const std::vector<FilterSpec>& filters) const;
  std::vector<PlayerRow> query_players(std::string_view session_id) const;
  PlayerRow player_row(const MemberKey& key) const;

  // Human labels get confidence 1.0 and a store-assigned created_at when
  // created_at is 0. Throws Error(unknown_member).
  LabelRecord put_label(LabelRecord record);
  std::vector<LabelRecord> get_labels(std::optional<LabelSource> source = std::nullopt) const;
  LabelState label_state(const MemberKey& key) const;
  std::string export_labels_csv() const;

  std::int64_t now() const { return clock_(); }

 private:
  void load();
  void store_match(const MatchRecord& m, std::uint64_t hash);
  void write_session(const Session& s) const;
  Session& session_ref(std::string_view id);
  const Session& session_ref(std::string_view id) const;
  std::optional<PlayerRow> row_locked(const MemberKey& key) const;

  std::filesystem::path root_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::mutex ingest_mutex_;
  std::mutex label_mutex_;
  std::map<std::string, StoredMatch, std::less<>> matches_;
  std::map<MemberKey, LabelState> labels_;
  std::map<std::string, Session, std::less<>> sessions_;
  std::uint64_t next_session_ = 1;
};

// FNV-1a 64.
std::uint64_t document_hash(std::string_view text);

}  // namespace actorlens
