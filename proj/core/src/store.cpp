#include "actorlens/store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "actorlens/error.hpp"
#include "json.hpp"

namespace actorlens {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::uint64_t document_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::int64_t system_clock_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

FilterSpec FilterSpec::make(std::string field, double lo, double hi) {
  if (field != "label_status" && !metric_index(field)) {
    throw Error(ErrorCode::bad_filter, "filters." + field, "unknown filter field '" + field + "'");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::bad_filter, "filters." + field, "filter bounds must be finite");
  }
  if (lo > hi) {
    std::ostringstream msg;
    msg << "filter range [" << lo << ", " << hi << "] has lo > hi";
    throw Error(ErrorCode::bad_filter, "filters." + field, msg.str());
  }
  return FilterSpec{std::move(field), lo, hi};
}

namespace {

double parse_number(std::string_view text, const std::string& path) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::bad_filter, path, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<FilterSpec> parse_filters(std::string_view text) {
  std::vector<FilterSpec> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) {
      throw Error(ErrorCode::bad_filter, "filters", "expected field:lo:hi, got '" + item + "'");
    }
    out.push_back(FilterSpec::make(parts[0], parse_number(parts[1], "filters." + parts[0] + ".lo"),
                                   parse_number(parts[2], "filters." + parts[0] + ".hi")));
  }
  return out;
}

int label_status(const std::optional<LabelRecord>& human) {
  if (!human) return 0;
  return human->label == Label::actor ? 2 : 1;
}

std::optional<LabelRecord> LabelState::human() const {
  for (auto it = audit.rbegin(); it != audit.rend(); ++it) {
    if (it->source == LabelSource::human) return *it;
  }
  return std::nullopt;
}

std::optional<LabelRecord> LabelState::model() const {
  for (auto it = audit.rbegin(); it != audit.rend(); ++it) {
    if (it->source == LabelSource::model) return *it;
  }
  return std::nullopt;
}

std::optional<LabelRecord> LabelState::effective() const {
  if (auto h = human()) return h;
  return model();
}

namespace {

// File-name safe encoding of identifiers.
std::string encode_id(std::string_view id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, p.string(), "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename over the target.
void write_file(const fs::path& p, const std::string& content) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_failure, p.string(), "cannot write " + p.string());
    out << content;
    if (!out) throw Error(ErrorCode::io_failure, p.string(), "write failed for " + p.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw Error(ErrorCode::io_failure, p.string(), "rename failed for " + p.string() + ": " + ec.message());
}

ordered label_to_json(const LabelRecord& r) {
  ordered j;
  j["match_id"] = r.match_id;
  j["player_id"] = r.player_id;
  j["label"] = to_string(r.label);
  j["source"] = to_string(r.source);
  j["confidence"] = r.confidence;
  j["created_at"] = r.created_at;
  return j;
}

LabelRecord label_from_json(const json& j) {
  LabelRecord r;
  r.match_id = j.at("match_id").get<std::string>();
  r.player_id = j.at("player_id").get<std::string>();
  r.label = parse_label(j.at("label").get<std::string>()).value();
  r.source = parse_label_source(j.at("source").get<std::string>()).value();
  r.confidence = j.at("confidence").get<double>();
  r.created_at = j.at("created_at").get<std::int64_t>();
  return r;
}

ordered key_to_json(const MemberKey& k) { return ordered{{"match_id", k.match_id}, {"player_id", k.player_id}}; }

MemberKey key_from_json(const json& j) {
  return {j.at("match_id").get<std::string>(), j.at("player_id").get<std::string>()};
}

std::vector<PlayerDerived> compute_derived(const MatchRecord& m) {
  std::vector<PlayerDerived> out;
  out.reserve(m.players.size());
  for (std::size_t p = 0; p < m.players.size(); ++p) {
    out.push_back({metric_vector(m, p), member_series(m, p), extract_features(m, p)});
  }
  return out;
}

std::string derived_to_json(const MatchRecord& m, std::uint64_t hash, const std::vector<PlayerDerived>& players) {
  ordered j;
  j["match_id"] = m.match_id;
  j["hash"] = hash;
  ordered arr = ordered::array();
  for (std::size_t p = 0; p < players.size(); ++p) {
    const auto& d = players[p];
    ordered row;
    row["player_id"] = m.players[p].player_id;
    row["priority_counts"] = d.metrics.priority_counts;
    row["inactive_percentage"] = d.metrics.inactive_percentage;
    row["report_count"] = d.metrics.report_count;
    ordered seq = ordered::array();
    for (auto k : d.series.priority) seq.push_back(to_string(k));
    row["priority_sequence"] = seq;
    row["economic_difference"] = d.series.economic_difference;
    row["features"] = d.features;
    arr.push_back(row);
  }
  j["players"] = arr;
  return j.dump() + "\n";
}

std::optional<std::vector<PlayerDerived>> derived_from_json(const std::string& text, const MatchRecord& m,
                                                            std::uint64_t hash) {
  try {
    const json j = json::parse(text);
    if (j.at("hash").get<std::uint64_t>() != hash) return std::nullopt;
    const auto& arr = j.at("players");
    if (arr.size() != m.players.size()) return std::nullopt;
    std::vector<PlayerDerived> out;
    for (std::size_t p = 0; p < arr.size(); ++p) {
      const auto& row = arr[p];
      PlayerDerived d;
      d.metrics.priority_counts = row.at("priority_counts").get<std::array<std::int64_t, kEventKindCount>>();
      d.metrics.inactive_percentage = row.at("inactive_percentage").get<double>();
      d.metrics.report_count = row.at("report_count").get<std::int64_t>();
      d.series.key = {m.match_id, m.players[p].player_id};
      for (const auto& k : row.at("priority_sequence")) {
        d.series.priority.push_back(parse_event_kind(k.get<std::string>()).value());
      }
      d.series.economic_difference = row.at("economic_difference").get<std::vector<double>>();
      d.features = row.at("features").get<FeatureVector>();
      out.push_back(std::move(d));
    }
    return out;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string to_chars_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

bool passes(const PlayerRow& row, const FilterSpec& f) {
  double v = 0.0;
  if (f.field == "label_status") {
    v = label_status(row.label);
  } else {
    v = row.metrics.as_array()[*metric_index(f.field)];
  }
  return v >= f.lo && v <= f.hi;
}

}  // namespace

Store::Store(fs::path root, Clock clock) : root_(std::move(root)), clock_(std::move(clock)) {
  std::error_code ec;
  for (const char* sub : {"matches", "derived", "labels", "sessions"}) {
    fs::create_directories(root_ / sub, ec);
    if (ec) throw Error(ErrorCode::io_failure, (root_ / sub).string(), "cannot create " + (root_ / sub).string());
  }
  load();
}

void Store::load() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(root_ / "matches")) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const std::string text = read_file(f);
    auto m = std::make_shared<MatchRecord>(parse_match(text));
    const std::uint64_t hash = document_hash(serialize_match(*m));
    const fs::path dpath = root_ / "derived" / (encode_id(m->match_id) + ".json");
    std::optional<std::vector<PlayerDerived>> cached;
    if (fs::exists(dpath)) cached = derived_from_json(read_file(dpath), *m, hash);
    if (!cached) {
      cached = compute_derived(*m);
      write_file(dpath, derived_to_json(*m, hash, *cached));
    }
    const std::string id = m->match_id;
    matches_[id] = StoredMatch{std::move(m), hash, std::move(*cached)};
  }

  for (const auto& e : fs::directory_iterator(root_ / "labels")) {
    if (e.path().extension() != ".json") continue;
    const json j = json::parse(read_file(e.path()));
    LabelState st;
    for (const auto& r : j.at("audit")) st.audit.push_back(label_from_json(r));
    labels_[key_from_json(j)] = std::move(st);
  }

  for (const auto& e : fs::directory_iterator(root_ / "sessions")) {
    if (e.path().extension() != ".json") continue;
    const json j = json::parse(read_file(e.path()));
    Session s;
    s.session_id = j.at("session_id").get<std::string>();
    for (const auto& k : j.at("focused")) s.focused.push_back(key_from_json(k));
    for (const auto& k : j.at("lasso")) s.lasso.push_back(key_from_json(k));
    for (const auto& f : j.at("filters")) {
      s.filters.push_back(FilterSpec::make(f.at("field").get<std::string>(), f.at("lo").get<double>(),
                                           f.at("hi").get<double>()));
    }
    s.seed = j.at("seed").get<std::uint64_t>();
    if (s.session_id.size() > 1 && s.session_id[0] == 's') {
      std::uint64_t n = 0;
      std::from_chars(s.session_id.data() + 1, s.session_id.data() + s.session_id.size(), n);
      next_session_ = std::max(next_session_, n + 1);
    }
    sessions_[s.session_id] = std::move(s);
  }
}

void Store::store_match(const MatchRecord& m, std::uint64_t hash) {
  auto derived = compute_derived(m);
  const std::string id = encode_id(m.match_id);
  write_file(root_ / "matches" / (id + ".json"), serialize_match(m) + "\n");
  write_file(root_ / "derived" / (id + ".json"), derived_to_json(m, hash, derived));
  std::unique_lock lock(mutex_);
  matches_[m.match_id] = StoredMatch{std::make_shared<MatchRecord>(m), hash, std::move(derived)};
}

IngestReport Store::ingest(std::istream& lines) {
  std::lock_guard ingest_lock(ingest_mutex_);
  IngestReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      MatchRecord m = parse_match(line);
      const std::uint64_t hash = document_hash(serialize_match(m));
      {
        std::shared_lock lock(mutex_);
        auto it = matches_.find(m.match_id);
        if (it != matches_.end() && it->second.hash == hash) {
          ++report.skipped;
          continue;
        }
      }
      store_match(m, hash);
      ++report.matches;
      report.player_matches += m.players.size();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::io_failure) throw;
      ++report.skipped;
      report.errors.push_back({line_no, std::string(to_string(e.code())), e.path(), e.what()});
    }
  }
  if (lines.bad()) throw Error(ErrorCode::io_failure, "corpus", "read failed");
  return report;
}

IngestReport Store::ingest_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, path.string(), "cannot open " + path.string());
  return ingest(in);
}

IngestReport Store::ingest_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ingest(in);
}

std::vector<std::string> Store::match_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : matches_) out.push_back(id);
  return out;
}

std::size_t Store::match_count() const {
  std::shared_lock lock(mutex_);
  return matches_.size();
}

StoredMatch Store::match(std::string_view match_id) const {
  std::shared_lock lock(mutex_);
  auto it = matches_.find(match_id);
  if (it == matches_.end()) {
    throw Error(ErrorCode::unknown_match, "match_id", "unknown match '" + std::string(match_id) + "'");
  }
  return it->second;
}

bool Store::has_member(const MemberKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = matches_.find(key.match_id);
  return it != matches_.end() && it->second.match->index_of(key.player_id).has_value();
}

std::vector<MemberKey> Store::all_members() const {
  std::shared_lock lock(mutex_);
  std::vector<MemberKey> out;
  for (const auto& [id, sm] : matches_) {
    for (const auto& p : sm.match->players) out.push_back({id, p.player_id});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MemberInfo> Store::catalog() const {
  std::shared_lock lock(mutex_);
  std::vector<MemberInfo> out;
  for (const auto& [id, sm] : matches_) {
    for (const auto& p : sm.match->players) out.push_back({{id, p.player_id}, p.hero_id, sm.match->ended_at});
  }
  return out;
}

PlayerDerived Store::derived(const MemberKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = matches_.find(key.match_id);
  if (it != matches_.end()) {
    if (auto idx = it->second.match->index_of(key.player_id)) return it->second.players[*idx];
  }
  throw Error(ErrorCode::unknown_member, "member", "unknown member " + key.match_id + "/" + key.player_id);
}

void Store::write_session(const Session& s) const {
  ordered j;
  j["session_id"] = s.session_id;
  j["seed"] = s.seed;
  ordered focused = ordered::array();
  for (const auto& k : s.focused) focused.push_back(key_to_json(k));
  j["focused"] = focused;
  ordered lasso = ordered::array();
  for (const auto& k : s.lasso) lasso.push_back(key_to_json(k));
  j["lasso"] = lasso;
  ordered filters = ordered::array();
  for (const auto& f : s.filters) filters.push_back(ordered{{"field", f.field}, {"lo", f.lo}, {"hi", f.hi}});
  j["filters"] = filters;
  write_file(root_ / "sessions" / (encode_id(s.session_id) + ".json"), j.dump() + "\n");
}

Session& Store::session_ref(std::string_view id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::unknown_session, "session_id", "unknown session '" + std::string(id) + "'");
  }
  return it->second;
}

const Session& Store::session_ref(std::string_view id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::unknown_session, "session_id", "unknown session '" + std::string(id) + "'");
  }
  return it->second;
}

Session Store::create_session(const std::vector<MemberKey>& members, bool all, std::uint64_t seed) {
  std::vector<MemberKey> focused = all ? all_members() : members;
  std::sort(focused.begin(), focused.end());
  focused.erase(std::unique(focused.begin(), focused.end()), focused.end());
  for (const auto& k : focused) {
    if (!has_member(k)) {
      throw Error(ErrorCode::unknown_member, "members", "unknown member " + k.match_id + "/" + k.player_id);
    }
  }
  std::unique_lock lock(mutex_);
  Session s;
  s.session_id = "s" + std::to_string(next_session_++);
  s.focused = std::move(focused);
  s.seed = seed;
  write_session(s);
  sessions_[s.session_id] = s;
  return s;
}

Session Store::session(std::string_view session_id) const {
  std::shared_lock lock(mutex_);
  return session_ref(session_id);
}

Session Store::set_filters(std::string_view session_id, std::vector<FilterSpec> filters) {
  std::unique_lock lock(mutex_);
  Session& s = session_ref(session_id);
  if (s.filters == filters) return s;
  s.filters = std::move(filters);
  write_session(s);
  return s;
}

Session Store::set_lasso(std::string_view session_id, std::vector<MemberKey> members) {
  if (members.empty()) throw Error(ErrorCode::empty_selection, "members", "lasso selection is empty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (const auto& k : members) {
    if (!has_member(k)) {
      throw Error(ErrorCode::unknown_member, "members", "unknown member " + k.match_id + "/" + k.player_id);
    }
  }
  std::unique_lock lock(mutex_);
  Session& s = session_ref(session_id);
  s.lasso = std::move(members);
  write_session(s);
  return s;
}

std::optional<PlayerRow> Store::row_locked(const MemberKey& key) const {
  auto it = matches_.find(key.match_id);
  if (it == matches_.end()) return std::nullopt;
  auto idx = it->second.match->index_of(key.player_id);
  if (!idx) return std::nullopt;
  const PlayerMatch& pm = it->second.match->players[*idx];
  PlayerRow row;
  row.key = key;
  row.hero_id = pm.hero_id;
  row.team = pm.team;
  row.metrics = it->second.players[*idx].metrics;
  if (auto l = labels_.find(key); l != labels_.end()) {
    row.label = l->second.human();
    row.prediction = l->second.model();
  }
  return row;
}

PlayerRow Store::player_row(const MemberKey& key) const {
  std::shared_lock lock(mutex_);
  auto row = row_locked(key);
  if (!row) throw Error(ErrorCode::unknown_member, "member", "unknown member " + key.match_id + "/" + key.player_id);
  return *row;
}

std::vector<PlayerRow> Store::query_players(std::string_view session_id, const std::vector<FilterSpec>& filters) const {
  std::shared_lock lock(mutex_);
  const Session& s = session_ref(session_id);
  std::vector<PlayerRow> out;
  for (const auto& k : s.focused) {
    auto row = row_locked(k);
    if (!row) continue;
    if (std::all_of(filters.begin(), filters.end(), [&](const FilterSpec& f) { return passes(*row, f); })) {
      out.push_back(std::move(*row));
    }
  }
  return out;
}

std::vector<PlayerRow> Store::query_players(std::string_view session_id) const {
  return query_players(session_id, session(session_id).filters);
}

LabelRecord Store::put_label(LabelRecord record) {
  const MemberKey key = record.key();
  if (!has_member(key)) {
    throw Error(ErrorCode::unknown_member, "member", "unknown member " + key.match_id + "/" + key.player_id);
  }
  if (record.source == LabelSource::human) record.confidence = 1.0;
  if (!(record.confidence >= 0.0 && record.confidence <= 1.0)) {
    throw Error(ErrorCode::schema_violation, "confidence", "confidence must be in [0, 1]");
  }
  if (record.created_at == 0) record.created_at = clock_();

  std::lock_guard serial(label_mutex_);
  std::unique_lock lock(mutex_);
  LabelState& st = labels_[key];
  st.audit.push_back(record);
  ordered j = key_to_json(key);
  ordered audit = ordered::array();
  for (const auto& r : st.audit) audit.push_back(label_to_json(r));
  j["audit"] = audit;
  write_file(root_ / "labels" / (encode_id(key.match_id) + "~" + encode_id(key.player_id) + ".json"),
             j.dump() + "\n");
  return record;
}

std::vector<LabelRecord> Store::get_labels(std::optional<LabelSource> source) const {
  std::shared_lock lock(mutex_);
  std::vector<LabelRecord> out;
  for (const auto& [key, st] : labels_) {
    std::optional<LabelRecord> r;
    if (!source) {
      r = st.effective();
    } else if (*source == LabelSource::human) {
      r = st.human();
    } else {
      r = st.model();
    }
    if (r) out.push_back(*r);
  }
  return out;
}

LabelState Store::label_state(const MemberKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = labels_.find(key);
  return it == labels_.end() ? LabelState{} : it->second;
}

std::string Store::export_labels_csv() const {
  std::ostringstream out;
  out << "match_id,player_id,label,source,confidence,created_at\n";
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto& r : get_labels()) {
    out << field(r.match_id) << ',' << field(r.player_id) << ',' << to_string(r.label) << ','
        << to_string(r.source) << ',' << to_chars_shortest(r.confidence) << ',' << format_timestamp(r.created_at)
        << '\n';
  }
  return out.str();
}

}  // namespace actorlens
