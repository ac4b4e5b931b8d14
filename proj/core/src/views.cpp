#include "views.hpp"

#include <algorithm>

#include "actorlens/error.hpp"
#include "actorlens/events.hpp"
#include "actorlens/metrics.hpp"

namespace actorlens::views {

Json key_json(const MemberKey& key) { return Json{{"match_id", key.match_id}, {"player_id", key.player_id}}; }

Json metrics_json(const MetricVector& m) {
  Json j;
  const auto values = m.as_array();
  const auto& names = metric_names();
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (i < kEventKindCount || i == kEventKindCount + 1) {
      j[std::string(names[i])] = static_cast<std::int64_t>(values[i]);
    } else {
      j[std::string(names[i])] = values[i];
    }
  }
  return j;
}

Json label_json(const LabelRecord& r) {
  Json j;
  j["match_id"] = r.match_id;
  j["player_id"] = r.player_id;
  j["label"] = to_string(r.label);
  j["source"] = to_string(r.source);
  j["confidence"] = r.confidence;
  j["created_at"] = format_timestamp(r.created_at);
  return j;
}

Json player_row_json(const PlayerRow& row) {
  Json j = key_json(row.key);
  j["hero_id"] = row.hero_id;
  j["team"] = to_string(row.team);
  j["metrics"] = metrics_json(row.metrics);
  j["label_status"] = label_status(row.label);
  j["label"] = row.label ? label_json(*row.label) : Json(nullptr);
  j["prediction"] = row.prediction ? label_json(*row.prediction) : Json(nullptr);
  return j;
}

namespace {

Json kinds_json(EventKindSet set) {
  Json arr = Json::array();
  for (auto k : set.members()) arr.push_back(to_string(k));
  return arr;
}

// Blue minus red cumulative gold at the last frame ending at or before t.
double gold_difference_at(const MatchRecord& m, std::int64_t t) {
  double diff = 0.0;
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    const std::int64_t end = std::min<std::int64_t>(kFrameIntervalS * static_cast<std::int64_t>(i + 1), m.duration_s);
    if (end > t) break;
    diff = 0.0;
    for (std::size_t p = 0; p < m.players.size(); ++p) {
      const double g = m.frames[i].per_player[p].gold;
      diff += m.players[p].team == Team::blue ? g : -g;
    }
  }
  return diff;
}

Json combats_json(const MatchRecord& m) {
  Json arr = Json::array();
  for (const auto& c : detect_team_combats(m)) {
    arr.push_back(Json{{"start_s", c.start_s}, {"end_s", c.end_s}, {"participants", c.participants}});
  }
  return arr;
}

Json event_stream(const MatchRecord& m) {
  Json arr = Json::array();
  for (const auto& e : m.key_events) {
    Json j;
    j["t"] = e.timestamp_s;
    j["kind"] = to_string(e.kind);
    j["team"] = to_string(e.team);
    j["principal"] = e.principal;
    if (e.death) j["victim"] = e.death->victim;
    j["y"] = gold_difference_at(m, e.timestamp_s);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

Json replay(const MatchRecord& m, std::string_view player_id, std::int64_t from_s, std::int64_t to_s) {
  const std::size_t idx = m.require_index(player_id);
  if (!(from_s >= 0 && from_s < to_s && to_s <= m.duration_s)) {
    throw Error(ErrorCode::bad_window, "from_s",
                "window must satisfy 0 <= from_s < to_s <= " + std::to_string(m.duration_s));
  }

  Json j;
  j["match_id"] = m.match_id;
  j["player_id"] = std::string(player_id);
  j["duration_s"] = m.duration_s;
  j["window"] = Json{{"from_s", from_s}, {"to_s", to_s}};
  j["events"] = event_stream(m);
  j["team_combats"] = combats_json(m);

  const auto minutes = abstract_minutes(m, idx);
  const auto inactive = minute_inactive_fraction(m, idx);
  double max_poke = 0.0;
  double max_monster = 0.0;
  double max_minion = 0.0;
  for (const auto& row : minutes) {
    max_poke = std::max(max_poke, row.poke_damage);
    max_monster = std::max(max_monster, row.monster_economy);
    max_minion = std::max(max_minion, row.minion_economy);
  }
  auto norm = [](double v, double max) { return max > 0.0 ? std::clamp(v / max, 0.0, 1.0) : 0.0; };
  Json rows = Json::array();
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    const auto& row = minutes[i];
    Json r;
    r["minute"] = row.minute_index;
    r["kinds"] = kinds_json(row.kinds_present);
    r["contributed_only"] = kinds_json(row.contributed_only);
    r["priority"] = to_string(priority_event(row));
    r["poke"] = norm(row.poke_damage, max_poke);
    r["monster"] = norm(row.monster_economy, max_monster);
    r["minion"] = norm(row.minion_economy, max_minion);
    r["inactive_fraction"] = i < inactive.size() ? inactive[i] : 0.0;
    rows.push_back(std::move(r));
  }
  j["player_events"] = std::move(rows);

  Json bars = Json::array();
  for (std::size_t p = 0; p < m.players.size(); ++p) {
    Json per_minute = Json::array();
    for (std::size_t t = 0; t < static_cast<std::size_t>(minute_count(m.duration_s)); ++t) {
      per_minute.push_back(m.frames[minute_end_frame(m, t)].per_player[p].gold);
    }
    bars.push_back(Json{{"player_id", m.players[p].player_id},
                        {"team", to_string(m.players[p].team)},
                        {"gold", m.frames.back().per_player[p].gold},
                        {"per_minute", std::move(per_minute)}});
  }
  j["gold_bars"] = std::move(bars);

  Json tracks = Json::array();
  for (std::size_t p = 0; p < m.players.size(); ++p) {
    Json points = Json::array();
    for (const auto& s : m.movement) {
      if (s.timestamp_s < from_s || s.timestamp_s > to_s) continue;
      points.push_back(Json{{"t", s.timestamp_s}, {"x", s.positions[p].x}, {"y", s.positions[p].y}});
    }
    tracks.push_back(Json{{"player_id", m.players[p].player_id},
                          {"team", to_string(m.players[p].team)},
                          {"points", std::move(points)}});
  }
  j["trajectories"] = std::move(tracks);
  return j;
}

Json summary(const StoredMatch& stored) {
  const MatchRecord& m = *stored.match;
  Json j;
  j["match_id"] = m.match_id;
  j["duration_s"] = m.duration_s;
  j["ended_at"] = m.ended_at;
  j["minutes"] = minute_count(m.duration_s);
  Json players = Json::array();
  for (std::size_t p = 0; p < m.players.size(); ++p) {
    const PlayerMatch& pm = m.players[p];
    const auto& s = pm.summary;
    Json r;
    r["player_id"] = pm.player_id;
    r["team"] = to_string(pm.team);
    r["hero_id"] = pm.hero_id;
    r["hero_type"] = pm.hero_type;
    r["lane"] = to_string(pm.lane);
    r["battle_result"] = to_string(s.battle_result);
    r["kills"] = s.kills;
    r["deaths"] = s.deaths;
    r["assists"] = s.assists;
    r["kda"] = kda(s.kills, s.assists, s.deaths);
    r["gold"] = s.total_gold;
    r["lane_opponent"] = m.players[lane_opponent(m, p)].player_id;
    r["economic_difference"] = stored.players[p].series.economic_difference;
    Json seq = Json::array();
    for (auto k : stored.players[p].series.priority) seq.push_back(to_string(k));
    r["priority_sequence"] = std::move(seq);
    r["metrics"] = metrics_json(stored.players[p].metrics);
    players.push_back(std::move(r));
  }
  j["players"] = std::move(players);
  j["events"] = event_stream(m);
  j["team_combats"] = combats_json(m);
  return j;
}

Json profile(const MatchRecord& m, std::string_view player_id) {
  const PlayerMatch& pm = m.players[m.require_index(player_id)];
  const auto& s = pm.summary;
  Json j;
  j["match_id"] = m.match_id;
  j["player_id"] = pm.player_id;
  j["hero_id"] = pm.hero_id;
  j["hero_type"] = pm.hero_type;
  j["idle_time_s"] = s.idle_time_s;
  j["healthy_recall"] = s.healthy_recall;
  j["surrender_times"] = s.surrender_times;
  j["offline_count"] = s.offline_count;
  j["reconnect_count"] = s.reconnect_count;
  j["report_count"] = s.report_count;
  j["proficiency_level"] = pm.profile.proficiency_level;
  j["grade"] = pm.profile.grade;
  j["elo"] = pm.profile.elo;
  return j;
}

Json projection(const std::vector<PlayerRow>& rows, const Embedding& embedding, std::uint64_t seed) {
  Json j;
  j["seed"] = seed;
  Json members = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Json r = player_row_json(rows[i]);
    r["x"] = embedding.coordinates[i].x;
    r["y"] = embedding.coordinates[i].y;
    members.push_back(std::move(r));
  }
  j["members"] = std::move(members);
  Json lo;
  Json hi;
  const auto& names = metric_names();
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    lo[std::string(names[i])] = embedding.normalization.min[i];
    hi[std::string(names[i])] = embedding.normalization.max[i];
  }
  j["normalization"] = Json{{"min", lo}, {"max", hi}};
  return j;
}

Json progression(const Cohort& cohort, const std::vector<MemberSeries>& series,
                 const std::optional<FlowSelection>& selection) {
  const ProgressionSummary s = progression_summary(series);
  Json j;
  j["mode"] = to_string(cohort.mode);
  j["anchor"] = cohort.anchor ? key_json(*cohort.anchor) : Json(nullptr);
  Json members = Json::array();
  for (const auto& k : cohort.members) members.push_back(key_json(k));
  j["members"] = std::move(members);

  Json boxes = Json::array();
  for (const auto& b : s.economic_difference) {
    boxes.push_back(Json{{"minute", b.minute_index}, {"count", b.count}, {"min", b.min}, {"q1", b.q1},
                         {"median", b.median}, {"q3", b.q3}, {"max", b.max}});
  }
  j["economic_difference"] = std::move(boxes);

  Json dists = Json::array();
  for (const auto& d : s.flow.distributions) {
    Json shares;
    Json counts;
    for (std::size_t k = 0; k < kEventKindCount; ++k) {
      shares[std::string(to_string(kAllEventKinds[k]))] = d.shares[k];
      counts[std::string(to_string(kAllEventKinds[k]))] = d.counts[k];
    }
    dists.push_back(Json{{"minute", d.minute_index}, {"members", d.members}, {"counts", counts}, {"shares", shares}});
  }
  j["distributions"] = std::move(dists);

  Json flows = Json::array();
  for (const auto& f : s.flow.flows) {
    Json transitions = Json::array();
    for (std::size_t a = 0; a < kEventKindCount; ++a) {
      for (std::size_t b = 0; b < kEventKindCount; ++b) {
        if (f.counts[a][b] == 0) continue;
        transitions.push_back(Json{{"from", to_string(kAllEventKinds[a])},
                                   {"to", to_string(kAllEventKinds[b])},
                                   {"count", f.counts[a][b]},
                                   {"share", f.shares[a][b]}});
      }
    }
    flows.push_back(Json{{"minute", f.minute_index}, {"members", f.members}, {"transitions", std::move(transitions)}});
  }
  j["flows"] = std::move(flows);

  Json seqs = Json::array();
  for (const auto& m : series) {
    Json seq = Json::array();
    for (auto k : m.priority) seq.push_back(to_string(k));
    Json r = key_json(m.key);
    r["priority"] = std::move(seq);
    seqs.push_back(std::move(r));
  }
  j["sequences"] = std::move(seqs);

  if (selection) {
    Json sel;
    sel["minute"] = selection->minute;
    sel["from"] = to_string(selection->from);
    sel["to"] = to_string(selection->to);
    Json picked = Json::array();
    for (const auto& k : filter_by_flow(series, selection->minute, selection->from, selection->to)) {
      picked.push_back(key_json(k));
    }
    sel["members"] = std::move(picked);
    j["selection"] = std::move(sel);
  } else {
    j["selection"] = nullptr;
  }
  return j;
}

}  // namespace actorlens::views
