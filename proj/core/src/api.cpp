#include "actorlens/api.hpp"

#include <charconv>
#include <memory>

#include "actorlens/cohort.hpp"
#include "actorlens/error.hpp"
#include "actorlens/projection.hpp"
#include "httplib.h"
#include "views.hpp"

namespace actorlens {

using views::Json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_player:
    case ErrorCode::unknown_match:
    case ErrorCode::unknown_member:
    case ErrorCode::unknown_target:
    case ErrorCode::unknown_session:
    case ErrorCode::unknown_anchor:
      return 404;
    case ErrorCode::malformed_document:
    case ErrorCode::bad_request:
      return 400;
    case ErrorCode::schema_violation:
    case ErrorCode::invariant_violation:
    case ErrorCode::empty_selection:
    case ErrorCode::bad_script:
    case ErrorCode::bad_window:
    case ErrorCode::bad_filter:
    case ErrorCode::too_few_points:
      return 422;
    case ErrorCode::io_failure:
      return 500;
  }
  return 500;
}

namespace {

Response json_response(const Json& body, int status = 200) {
  return {status, "application/json", body.dump()};
}

Response error_response(int status, std::string_view code, std::string_view message, std::string_view path) {
  return json_response(Json{{"code", code}, {"message", message}, {"path", path}}, status);
}

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const auto j = path.find('/', i);
    out.emplace_back(path.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j;
  }
  return out;
}

const std::string* query_param(const Request& r, const std::string& name) {
  auto it = r.query.find(name);
  return it == r.query.end() ? nullptr : &it->second;
}

const std::string& require_param(const Request& r, const std::string& name) {
  const auto* v = query_param(r, name);
  if (!v) throw Error(ErrorCode::bad_request, name, "missing query parameter '" + name + "'");
  return *v;
}

std::int64_t int_param(const std::string& text, const std::string& name) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::bad_request, name, "'" + name + "' must be an integer, got '" + text + "'");
  }
  return v;
}

Json parse_body(const Request& r) {
  try {
    return Json::parse(r.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_document, "body", std::string("request body is not JSON: ") + e.what());
  }
}

std::vector<MemberKey> member_list(const Json& arr, const std::string& path) {
  if (!arr.is_array()) throw Error(ErrorCode::schema_violation, path, path + " must be an array of members");
  std::vector<MemberKey> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& m = arr[i];
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!m.is_object() || !m.contains("match_id") || !m.contains("player_id") || !m["match_id"].is_string() ||
        !m["player_id"].is_string()) {
      throw Error(ErrorCode::schema_violation, p, p + " must be {match_id, player_id}");
    }
    out.push_back({m["match_id"].get<std::string>(), m["player_id"].get<std::string>()});
  }
  return out;
}

Json filters_json(const std::vector<FilterSpec>& filters) {
  Json arr = Json::array();
  for (const auto& f : filters) arr.push_back(Json{{"field", f.field}, {"lo", f.lo}, {"hi", f.hi}});
  return arr;
}

Json ingest_json(const IngestReport& r) {
  Json errors = Json::array();
  for (const auto& e : r.errors) {
    errors.push_back(Json{{"line", e.line}, {"code", e.code}, {"path", e.path}, {"message", e.message}});
  }
  return Json{{"matches", r.matches}, {"player_matches", r.player_matches}, {"skipped", r.skipped},
              {"errors", errors}};
}

std::optional<views::FlowSelection> parse_flow(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
  if (b == std::string::npos) throw Error(ErrorCode::bad_request, "flow", "flow must be minute:from_kind:to_kind");
  views::FlowSelection s;
  s.minute = int_param(text.substr(0, a), "flow");
  auto from = parse_event_kind(text.substr(a + 1, b - a - 1));
  auto to = parse_event_kind(text.substr(b + 1));
  if (!from || !to) throw Error(ErrorCode::bad_request, "flow", "unknown event kind in flow '" + text + "'");
  s.from = *from;
  s.to = *to;
  return s;
}

class SlotGuard {
 public:
  SlotGuard(std::mutex& m, std::set<std::string>& busy, std::string id) : m_(m), busy_(busy), id_(std::move(id)) {}
  ~SlotGuard() {
    std::lock_guard lock(m_);
    busy_.erase(id_);
  }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::mutex& m_;
  std::set<std::string>& busy_;
  std::string id_;
};

}  // namespace

Service::Service(Store& store, ServiceOptions options) : store_(store), options_(std::move(options)) {}

Response Service::handle(const Request& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what(), e.path());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what(), request.path);
  }
}

Response Service::predict(const std::string& session_id) {
  const Session session = store_.session(session_id);
  {
    std::lock_guard lock(predict_mutex_);
    if (!predicting_.insert(session_id).second) {
      return error_response(429, "predict_in_progress", "a prediction is already running for this session",
                            "/sessions/" + session_id + "/predict");
    }
  }
  SlotGuard guard(predict_mutex_, predicting_, session_id);
  if (options_.on_predict_start) options_.on_predict_start(session_id);

  std::vector<LabeledExample> examples;
  std::set<MemberKey> human;
  for (const auto& r : store_.get_labels(LabelSource::human)) {
    examples.push_back({r.key(), store_.derived(r.key()).features, r.label});
    human.insert(r.key());
  }
  ModelConfig cfg = options_.model;
  cfg.gbdt.seed = session.seed;
  TrainResult trained = train(examples, cfg);
  if (auto* missing = std::get_if<InsufficientLabels>(&trained)) {
    Json body{{"code", "insufficient_labels"},
              {"message", "training needs at least " + std::to_string(cfg.min_labels_per_class) +
                              " human labels of each class"},
              {"path", "/sessions/" + session_id + "/predict"},
              {"normal", missing->normal},
              {"actor", missing->actor}};
    return json_response(body, 409);
  }
  const Classifier& classifier = std::get<Classifier>(trained);

  std::vector<PredictionTarget> targets;
  for (const auto& k : session.focused) {
    if (!human.count(k)) targets.push_back({k, store_.derived(k).features});
  }
  const auto predictions = actorlens::predict(classifier, targets, human, store_.now());
  Json out = Json::array();
  for (const auto& p : predictions) out.push_back(views::label_json(store_.put_label(p)));
  std::size_t actors = 0;
  for (const auto& e : examples) actors += e.label == Label::actor;
  return json_response(Json{{"session_id", session_id},
                            {"trained_on", Json{{"normal", examples.size() - actors}, {"actor", actors}}},
                            {"predictions", out}});
}

Response Service::route(const Request& r) {
  const auto seg = segments(r.path);
  const bool get = r.method == "GET";
  const bool post = r.method == "POST";
  auto method_not_allowed = [&] { return error_response(405, "method_not_allowed", "method not allowed", r.path); };

  if (seg.size() == 1 && seg[0] == "health") {
    if (!get) return method_not_allowed();
    return json_response(Json{{"status", "ok"}});
  }

  if (seg.size() == 1 && seg[0] == "ingest") {
    if (!post) return method_not_allowed();
    return json_response(ingest_json(store_.ingest_text(r.body)));
  }

  if (seg.size() == 1 && seg[0] == "sessions") {
    if (!post) return method_not_allowed();
    const Json body = parse_body(r);
    if (!body.is_object() || !body.contains("members")) {
      throw Error(ErrorCode::schema_violation, "members", "body must carry \"members\": [...] or \"all\"");
    }
    std::uint64_t seed = 0;
    if (body.contains("seed")) {
      if (!body["seed"].is_number_unsigned()) throw Error(ErrorCode::schema_violation, "seed", "seed must be >= 0");
      seed = body["seed"].get<std::uint64_t>();
    }
    const Json& members = body["members"];
    Session s;
    if (members.is_string()) {
      if (members.get<std::string>() != "all") {
        throw Error(ErrorCode::schema_violation, "members", "members must be a list or \"all\"");
      }
      s = store_.create_session({}, true, seed);
    } else {
      s = store_.create_session(member_list(members, "members"), false, seed);
    }
    return json_response(Json{{"session_id", s.session_id}, {"members", s.focused.size()}, {"seed", s.seed}}, 201);
  }

  if (seg.size() == 3 && seg[0] == "sessions") {
    const std::string& id = seg[1];
    const std::string& what = seg[2];
    if (what == "players") {
      if (!get) return method_not_allowed();
      Session s = store_.session(id);
      if (const auto* f = query_param(r, "filters")) s = store_.set_filters(id, parse_filters(*f));
      Json rows = Json::array();
      for (const auto& row : store_.query_players(id, s.filters)) rows.push_back(views::player_row_json(row));
      return json_response(Json{{"session_id", id},
                                {"filters", filters_json(s.filters)},
                                {"count", rows.size()},
                                {"players", rows}});
    }
    if (what == "projection") {
      if (!get) return method_not_allowed();
      const Session s = store_.session(id);
      ProjectionConfig cfg;
      cfg.seed = s.seed;
      if (const auto* seed = query_param(r, "seed")) {
        const auto v = int_param(*seed, "seed");
        if (v < 0) throw Error(ErrorCode::bad_request, "seed", "seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(v);
      }
      const auto rows = store_.query_players(id, s.filters);
      std::vector<MetricVector> vectors;
      for (const auto& row : rows) vectors.push_back(row.metrics);
      const Embedding e = embed(vectors, cfg);
      return json_response(views::projection(rows, e, cfg.seed));
    }
    if (what == "lasso") {
      if (!post) return method_not_allowed();
      const Json body = parse_body(r);
      if (!body.is_object() || !body.contains("members")) {
        throw Error(ErrorCode::schema_violation, "members", "body must carry \"members\"");
      }
      const Session s = store_.set_lasso(id, member_list(body["members"], "members"));
      Json members = Json::array();
      for (const auto& k : s.lasso) members.push_back(views::key_json(k));
      return json_response(Json{{"session_id", id}, {"members", members}});
    }
    if (what == "progression") {
      if (!get) return method_not_allowed();
      const Session s = store_.session(id);
      const std::string mode_text = query_param(r, "mode") ? *query_param(r, "mode") : "lasso";
      const auto mode = parse_cohort_mode(mode_text);
      if (!mode) throw Error(ErrorCode::bad_request, "mode", "mode must be lasso, history or hero");
      std::optional<MemberKey> anchor;
      if (query_param(r, "anchor_match") || query_param(r, "anchor_player")) {
        anchor = MemberKey{require_param(r, "anchor_match"), require_param(r, "anchor_player")};
      }
      std::size_t limit = kDefaultHistoryLimit;
      if (const auto* l = query_param(r, "limit")) {
        const auto v = int_param(*l, "limit");
        if (v < 1) throw Error(ErrorCode::bad_request, "limit", "limit must be >= 1");
        limit = static_cast<std::size_t>(v);
      }
      const Cohort cohort = build_cohort(*mode, anchor, s.lasso, store_.catalog(), limit);
      std::vector<MemberSeries> series;
      for (const auto& k : cohort.members) series.push_back(store_.derived(k).series);
      std::optional<views::FlowSelection> selection;
      if (const auto* f = query_param(r, "flow")) selection = parse_flow(*f);
      return json_response(views::progression(cohort, series, selection));
    }
    if (what == "predict") {
      if (!post) return method_not_allowed();
      return predict(id);
    }
  }

  if (seg.size() == 3 && seg[0] == "matches") {
    if (!get) return method_not_allowed();
    const StoredMatch stored = store_.match(seg[1]);
    if (seg[2] == "summary") return json_response(views::summary(stored));
    if (seg[2] == "profile") return json_response(views::profile(*stored.match, require_param(r, "player")));
    if (seg[2] == "replay") {
      const std::string& player = require_param(r, "player");
      const std::int64_t from = query_param(r, "from_s") ? int_param(*query_param(r, "from_s"), "from_s") : 0;
      const std::int64_t to =
          query_param(r, "to_s") ? int_param(*query_param(r, "to_s"), "to_s") : stored.match->duration_s;
      return json_response(views::replay(*stored.match, player, from, to));
    }
  }

  if (seg.size() == 1 && seg[0] == "labels") {
    if (get) {
      std::optional<LabelSource> source;
      if (const auto* s = query_param(r, "source")) {
        source = parse_label_source(*s);
        if (!source) throw Error(ErrorCode::bad_request, "source", "source must be human or model");
      }
      Json out = Json::array();
      for (const auto& l : store_.get_labels(source)) out.push_back(views::label_json(l));
      return json_response(Json{{"labels", out}});
    }
    if (!post) return method_not_allowed();
    const Json body = parse_body(r);
    if (!body.is_object()) throw Error(ErrorCode::schema_violation, "body", "label body must be an object");
    for (const char* field : {"match_id", "player_id", "label"}) {
      if (!body.contains(field) || !body[field].is_string()) {
        throw Error(ErrorCode::schema_violation, field, std::string(field) + " must be a string");
      }
    }
    LabelRecord rec;
    rec.match_id = body["match_id"].get<std::string>();
    rec.player_id = body["player_id"].get<std::string>();
    const auto label = parse_label(body["label"].get<std::string>());
    if (!label) throw Error(ErrorCode::schema_violation, "label", "label must be normal or actor");
    rec.label = *label;
    if (body.contains("source")) {
      const auto source = body["source"].is_string() ? parse_label_source(body["source"].get<std::string>())
                                                     : std::nullopt;
      if (!source) throw Error(ErrorCode::schema_violation, "source", "source must be human or model");
      rec.source = *source;
    }
    if (body.contains("confidence")) {
      if (!body["confidence"].is_number()) {
        throw Error(ErrorCode::schema_violation, "confidence", "confidence must be a number");
      }
      rec.confidence = body["confidence"].get<double>();
    }
    const LabelRecord stored = store_.put_label(rec);
    const LabelState state = store_.label_state(stored.key());
    Json j = views::label_json(stored);
    j["audit_length"] = state.audit.size();
    j["current"] = state.effective() ? views::label_json(*state.effective()) : Json(nullptr);
    return json_response(j, 201);
  }

  if (seg.size() == 2 && seg[0] == "labels" && seg[1] == "export.csv") {
    if (!get) return method_not_allowed();
    return {200, "text/csv", store_.export_labels_csv()};
  }

  return error_response(404, "not_found", "no route for " + r.method + " " + r.path, r.path);
}

namespace {

std::mutex g_server_mutex;
httplib::Server* g_server = nullptr;

}  // namespace

bool serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    if (req.is_multipart_form_data()) {
      if (req.has_file("corpus")) r.body = req.get_file_value("corpus").content;
    } else {
      r.body = req.body;
    }
    const Response out = service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/.*)", handler);
  server.Post(R"(/.*)", handler);
  if (!server.bind_to_port(host, port)) return false;
  {
    std::lock_guard lock(g_server_mutex);
    g_server = &server;
  }
  server.listen_after_bind();
  std::lock_guard lock(g_server_mutex);
  g_server = nullptr;
  return true;
}

void stop_server() {
  std::lock_guard lock(g_server_mutex);
  if (g_server) g_server->stop();
}

}  // namespace actorlens
