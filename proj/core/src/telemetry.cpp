#include "actorlens/telemetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "actorlens/error.hpp"
#include "json.hpp"

namespace actorlens {

using Json = nlohmann::ordered_json;

std::string_view to_string(Team team) { return team == Team::blue ? "blue" : "red"; }

std::string_view to_string(Lane lane) {
  switch (lane) {
    case Lane::top: return "top";
    case Lane::mid: return "mid";
    case Lane::bottom: return "bottom";
    case Lane::jungle: return "jungle";
    case Lane::support: return "support";
  }
  return "top";
}

std::string_view to_string(BattleResult result) {
  return result == BattleResult::win ? "win" : "loss";
}

std::string_view to_string(KeyEventKind kind) {
  switch (kind) {
    case KeyEventKind::death: return "death";
    case KeyEventKind::turret_destroyed: return "turret_destroyed";
    case KeyEventKind::dragon_killed: return "dragon_killed";
    case KeyEventKind::baron_killed: return "baron_killed";
  }
  return "death";
}

std::optional<Team> parse_team(std::string_view text) {
  if (text == "blue") return Team::blue;
  if (text == "red") return Team::red;
  return std::nullopt;
}

std::optional<Lane> parse_lane(std::string_view text) {
  for (Lane lane : {Lane::top, Lane::mid, Lane::bottom, Lane::jungle, Lane::support}) {
    if (to_string(lane) == text) return lane;
  }
  return std::nullopt;
}

std::optional<BattleResult> parse_battle_result(std::string_view text) {
  if (text == "win") return BattleResult::win;
  if (text == "loss") return BattleResult::loss;
  return std::nullopt;
}

std::optional<KeyEventKind> parse_key_event_kind(std::string_view text) {
  for (KeyEventKind kind : {KeyEventKind::death, KeyEventKind::turret_destroyed,
                            KeyEventKind::dragon_killed, KeyEventKind::baron_killed}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::optional<std::size_t> MatchRecord::index_of(std::string_view player_id) const {
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (players[i].player_id == player_id) return i;
  }
  return std::nullopt;
}

std::size_t MatchRecord::require_index(std::string_view player_id) const {
  if (auto idx = index_of(player_id)) return *idx;
  throw Error(ErrorCode::unknown_player, "player_id",
              "player " + std::string(player_id) + " does not play in match " + match_id);
}

std::int64_t frame_count(std::int64_t duration_s) {
  return duration_s <= 0 ? 0 : (duration_s + kFrameIntervalS - 1) / kFrameIntervalS;
}

std::int64_t movement_sample_count(std::int64_t duration_s) {
  return duration_s < 0 ? 0 : duration_s / kMovementIntervalS + 1;
}

std::int64_t minute_count(std::int64_t duration_s) {
  return duration_s <= 0 ? 0 : (duration_s + kMinuteS - 1) / kMinuteS;
}

PlayerFrame operator-(const PlayerFrame& a, const PlayerFrame& b) {
  PlayerFrame d;
  d.gold = a.gold - b.gold;
  d.kills = a.kills - b.kills;
  d.deaths = a.deaths - b.deaths;
  d.assists = a.assists - b.assists;
  d.damage_to_hero = a.damage_to_hero - b.damage_to_hero;
  d.damage_total = a.damage_total - b.damage_total;
  d.received_damage = a.received_damage - b.received_damage;
  d.minions_killed = a.minions_killed - b.minions_killed;
  d.minion_gold = a.minion_gold - b.minion_gold;
  d.monster_gold = a.monster_gold - b.monster_gold;
  return d;
}

std::size_t minute_end_frame(const MatchRecord& match, std::size_t minute) {
  const std::size_t per_minute = kMinuteS / kFrameIntervalS;
  return std::min(minute * per_minute + per_minute - 1, match.frames.size() - 1);
}

PlayerFrame interval_delta(const MatchRecord& match, std::size_t player, std::size_t interval) {
  const PlayerFrame& cur = match.frames.at(interval).per_player.at(player);
  if (interval == 0) return cur;
  return cur - match.frames[interval - 1].per_player.at(player);
}

PlayerFrame minute_delta(const MatchRecord& match, std::size_t player, std::size_t minute) {
  const PlayerFrame& cur = match.frames.at(minute_end_frame(match, minute)).per_player.at(player);
  if (minute == 0) return cur;
  return cur - match.frames.at(minute_end_frame(match, minute - 1)).per_player.at(player);
}

std::size_t minute_of(const MatchRecord& match, std::int64_t t) {
  const auto minutes = minute_count(match.duration_s);
  const auto m = std::clamp<std::int64_t>(t / kMinuteS, 0, std::max<std::int64_t>(minutes - 1, 0));
  return static_cast<std::size_t>(m);
}

namespace {

// Summary field table: JSON key <-> member.
struct IntField {
  const char* key;
  std::int64_t MatchSummaryStats::*member;
};
struct RealField {
  const char* key;
  double MatchSummaryStats::*member;
};

constexpr std::array kSummaryReals{
    RealField{"dmgtotal", &MatchSummaryStats::damage_total},
    RealField{"dmgtohero", &MatchSummaryStats::damage_to_hero},
    RealField{"towerhurt", &MatchSummaryStats::damage_to_turret},
    RealField{"rcvdmgfromall", &MatchSummaryStats::received_from_all},
    RealField{"rcvdmgfromhero", &MatchSummaryStats::received_from_hero},
    RealField{"rcvdmgfromother", &MatchSummaryStats::received_from_other},
    RealField{"coin", &MatchSummaryStats::total_gold},
    RealField{"playermonsterkillcoin", &MatchSummaryStats::monster_gold},
    RealField{"moneyforkill", &MatchSummaryStats::kill_gold},
    RealField{"playersoldierkillcoin", &MatchSummaryStats::minion_gold},
};

constexpr std::array kSummaryInts{
    IntField{"kills", &MatchSummaryStats::kills},
    IntField{"die", &MatchSummaryStats::deaths},
    IntField{"assistant", &MatchSummaryStats::assists},
    IntField{"killsoldiers", &MatchSummaryStats::minions_killed},
    IntField{"surrendertimes", &MatchSummaryStats::surrender_times},
    IntField{"healthyrecall", &MatchSummaryStats::healthy_recall},
    IntField{"equiptotalbuy", &MatchSummaryStats::equipment_purchases},
    IntField{"playeroffline", &MatchSummaryStats::offline_count},
    IntField{"playerreconnection", &MatchSummaryStats::reconnect_count},
    IntField{"skillusetimes", &MatchSummaryStats::skill_hits},
    IntField{"skillmisstimes", &MatchSummaryStats::skill_misses},
    IntField{"playerkilllittledragoncnt", &MatchSummaryStats::dragon_kills},
    IntField{"playerkillbigdragoncnt", &MatchSummaryStats::baron_kills},
    IntField{"killbluebuff", &MatchSummaryStats::blue_buff_kills},
    IntField{"killredbuff", &MatchSummaryStats::red_buff_kills},
    IntField{"triplekill", &MatchSummaryStats::triple_kills},
    IntField{"fourkill", &MatchSummaryStats::quadra_kills},
    IntField{"fivekill", &MatchSummaryStats::penta_kills},
    IntField{"playervisiblewardcount", &MatchSummaryStats::visible_wards},
    IntField{"idle_time", &MatchSummaryStats::idle_time_s},
    IntField{"report_count", &MatchSummaryStats::report_count},
};

struct FrameIntField {
  const char* key;
  std::int64_t PlayerFrame::*member;
};
struct FrameRealField {
  const char* key;
  double PlayerFrame::*member;
};

constexpr std::array kFrameReals{
    FrameRealField{"gold", &PlayerFrame::gold},
    FrameRealField{"damage_to_hero", &PlayerFrame::damage_to_hero},
    FrameRealField{"damage_total", &PlayerFrame::damage_total},
    FrameRealField{"received_damage", &PlayerFrame::received_damage},
    FrameRealField{"playersoldierkillcoin", &PlayerFrame::minion_gold},
    FrameRealField{"playermonsterkillcoin", &PlayerFrame::monster_gold},
};

constexpr std::array kFrameInts{
    FrameIntField{"kills", &PlayerFrame::kills},
    FrameIntField{"deaths", &PlayerFrame::deaths},
    FrameIntField{"assists", &PlayerFrame::assists},
    FrameIntField{"minions_killed", &PlayerFrame::minions_killed},
};

// ---------------------------------------------------------------- parsing

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::schema_violation, path, path + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string get_string(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string()) schema_error(join(path, key), "expected string");
  return v.get<std::string>();
}

std::int64_t get_int(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number_integer()) schema_error(join(path, key), "expected integer");
  return v.get<std::int64_t>();
}

double get_real(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number()) schema_error(join(path, key), "expected number");
  return v.get<double>();
}

bool get_bool(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_boolean()) schema_error(join(path, key), "expected boolean");
  return v.get<bool>();
}

const Json& get_array(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_array()) schema_error(join(path, key), "expected array");
  return v;
}

Point get_point(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    schema_error(join(path, key), "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

template <class Enum, class Parser>
Enum get_enum(const Json& obj, const char* key, const std::string& path, Parser parser) {
  std::string text = get_string(obj, key, path);
  auto value = parser(text);
  if (!value) schema_error(join(path, key), "unrecognized value '" + text + "'");
  return *value;
}

PlayerMatch parse_player(const Json& j, const std::string& path) {
  PlayerMatch p;
  p.player_id = get_string(j, "player_id", path);
  p.team = get_enum<Team>(j, "team", path, parse_team);
  p.hero_id = get_string(j, "hero_id", path);
  p.hero_type = get_string(j, "hero_type", path);
  p.lane = get_enum<Lane>(j, "lane", path, parse_lane);

  const std::string profile_path = join(path, "profile");
  const Json& profile = require(j, "profile", path);
  p.profile.proficiency_level = get_int(profile, "proficiency_level", profile_path);
  p.profile.grade = get_int(profile, "grade", profile_path);
  p.profile.elo = get_real(profile, "elo", profile_path);

  const std::string summary_path = join(path, "summary");
  const Json& summary = require(j, "summary", path);
  for (const auto& f : kSummaryReals) p.summary.*f.member = get_real(summary, f.key, summary_path);
  for (const auto& f : kSummaryInts) p.summary.*f.member = get_int(summary, f.key, summary_path);
  p.summary.battle_result =
      get_enum<BattleResult>(summary, "battleresult", summary_path, parse_battle_result);
  return p;
}

KeyEvent parse_event(const Json& j, const std::string& path) {
  KeyEvent e;
  e.timestamp_s = get_int(j, "t", path);
  e.kind = get_enum<KeyEventKind>(j, "kind", path, parse_key_event_kind);
  e.team = get_enum<Team>(j, "team", path, parse_team);
  e.principal = get_string(j, "principal", path);
  const Json& assists = get_array(j, "assists", path);
  for (std::size_t i = 0; i < assists.size(); ++i) {
    if (!assists[i].is_string()) schema_error(index_path(join(path, "assists"), i), "expected string");
    e.assists.push_back(assists[i].get<std::string>());
  }
  e.position = get_point(j, "pos", path);
  if (auto it = j.find("death"); it != j.end() && !it->is_null()) {
    const std::string dpath = join(path, "death");
    DeathRecord d;
    d.victim = get_string(*it, "victim", dpath);
    d.player_to_hero = get_real(*it, "p2h", dpath);
    d.player_to_turret = get_real(*it, "p2t", dpath);
    d.hero_to_player = get_real(*it, "h2p", dpath);
    d.turret_to_player = get_real(*it, "t2p", dpath);
    d.hero_number_to_player = get_int(*it, "hero_count", dpath);
    d.dead_in_turret = get_bool(*it, "in_turret", dpath);
    e.death = std::move(d);
  }
  return e;
}

// Reads an object keyed by player_id into roster order.
template <class T, class Fn>
std::vector<T> parse_per_player(const Json& obj, const std::string& path,
                                const std::vector<PlayerMatch>& roster, Fn parse_one) {
  if (!obj.is_object()) schema_error(path, "expected object keyed by player_id");
  std::vector<T> out;
  out.reserve(roster.size());
  for (const auto& p : roster) {
    auto it = obj.find(p.player_id);
    if (it == obj.end()) schema_error(path, "missing player " + p.player_id);
    out.push_back(parse_one(*it, path + "." + p.player_id));
  }
  if (obj.size() != roster.size()) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = std::any_of(roster.begin(), roster.end(),
                               [&](const PlayerMatch& p) { return p.player_id == it.key(); });
      if (!known) schema_error(path + "." + it.key(), "player not in roster");
    }
  }
  return out;
}

PlayerFrame parse_player_frame(const Json& j, const std::string& path) {
  PlayerFrame f;
  for (const auto& field : kFrameReals) f.*field.member = get_real(j, field.key, path);
  for (const auto& field : kFrameInts) f.*field.member = get_int(j, field.key, path);
  return f;
}

// ---------------------------------------------------------- serialization

Json point_json(Point p) { return Json::array({p.x, p.y}); }

Json player_json(const PlayerMatch& p) {
  Json j;
  j["player_id"] = p.player_id;
  j["team"] = to_string(p.team);
  j["hero_id"] = p.hero_id;
  j["hero_type"] = p.hero_type;
  j["lane"] = to_string(p.lane);
  j["profile"] = {{"proficiency_level", p.profile.proficiency_level},
                  {"grade", p.profile.grade},
                  {"elo", p.profile.elo}};
  Json s = Json::object();
  for (const auto& f : kSummaryReals) s[f.key] = p.summary.*f.member;
  for (const auto& f : kSummaryInts) s[f.key] = p.summary.*f.member;
  s["battleresult"] = to_string(p.summary.battle_result);
  j["summary"] = std::move(s);
  return j;
}

Json event_json(const KeyEvent& e) {
  Json j;
  j["t"] = e.timestamp_s;
  j["kind"] = to_string(e.kind);
  j["team"] = to_string(e.team);
  j["principal"] = e.principal;
  j["assists"] = e.assists;
  j["pos"] = point_json(e.position);
  if (e.death) {
    const DeathRecord& d = *e.death;
    j["death"] = {{"victim", d.victim},
                  {"p2h", d.player_to_hero},
                  {"p2t", d.player_to_turret},
                  {"h2p", d.hero_to_player},
                  {"t2p", d.turret_to_player},
                  {"hero_count", d.hero_number_to_player},
                  {"in_turret", d.dead_in_turret}};
  }
  return j;
}

// ------------------------------------------------------------- validation

class Checker {
 public:
  void add(std::string code, std::string path, std::string message) {
    out_.push_back({std::move(code), std::move(path), std::move(message)});
  }
  void non_negative(double v, const std::string& path) {
    if (!std::isfinite(v)) {
      add("non_finite", path, path + " must be finite");
    } else if (v < 0) {
      add("negative_value", path, path + " must be >= 0");
    }
  }
  void in_unit_square(Point p, const std::string& path) {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!ok(p.x) || !ok(p.y)) add("position_out_of_range", path, path + " outside [0,1]^2");
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

void validate_players(const MatchRecord& m, Checker& c) {
  if (m.players.size() != kPlayersPerMatch) {
    c.add("player_count", "players",
          "players: expected 10, got " + std::to_string(m.players.size()));
  }
  std::size_t blue = 0;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < m.players.size(); ++i) {
    const PlayerMatch& p = m.players[i];
    const std::string path = index_path("players", i);
    if (p.team == Team::blue) ++blue;
    if (p.player_id.empty()) c.add("empty_id", join(path, "player_id"), "player_id is empty");
    if (p.hero_id.empty()) c.add("empty_id", join(path, "hero_id"), "hero_id is empty");
    if (!seen.insert(p.player_id).second) {
      c.add("duplicate_player", join(path, "player_id"), "duplicate player " + p.player_id);
    }
    c.non_negative(static_cast<double>(p.profile.proficiency_level),
                   path + ".profile.proficiency_level");
    c.non_negative(static_cast<double>(p.profile.grade), path + ".profile.grade");
    c.non_negative(p.profile.elo, path + ".profile.elo");

    const std::string spath = join(path, "summary");
    for (const auto& f : kSummaryReals) c.non_negative(p.summary.*f.member, spath + "." + f.key);
    for (const auto& f : kSummaryInts) {
      c.non_negative(static_cast<double>(p.summary.*f.member), spath + "." + f.key);
    }
    if (p.summary.idle_time_s > m.duration_s) {
      c.add("idle_exceeds_duration", spath + ".idle_time", "idle_time exceeds duration");
    }
    if (p.summary.received_from_all < p.summary.received_from_hero) {
      c.add("received_damage_split", spath + ".rcvdmgfromall",
            "rcvdmgfromall must be >= rcvdmgfromhero");
    }
  }
  if (m.players.size() == kPlayersPerMatch && blue != kPlayersPerTeam) {
    c.add("team_balance", "players", "players: expected 5 per team");
  }
}

void validate_events(const MatchRecord& m, Checker& c) {
  auto known = [&](const std::string& id) { return m.index_of(id).has_value(); };
  for (std::size_t i = 0; i < m.key_events.size(); ++i) {
    const KeyEvent& e = m.key_events[i];
    const std::string path = index_path("key_events", i);
    if (e.timestamp_s < 0 || e.timestamp_s > m.duration_s) {
      c.add("event_time_range", join(path, "t"), path + ".t outside [0, duration]");
    }
    if (i > 0 && e.timestamp_s < m.key_events[i - 1].timestamp_s) {
      c.add("event_order", join(path, "t"), "key_events not sorted by timestamp");
    }
    c.in_unit_square(e.position, join(path, "pos"));
    if (e.principal.empty()) {
      if (e.kind != KeyEventKind::death) {
        c.add("empty_id", join(path, "principal"), "objective events need a principal");
      }
    } else if (!known(e.principal)) {
      c.add("unknown_player_ref", join(path, "principal"), "unknown player " + e.principal);
    }
    for (std::size_t a = 0; a < e.assists.size(); ++a) {
      if (!known(e.assists[a])) {
        c.add("unknown_player_ref", index_path(join(path, "assists"), a),
              "unknown player " + e.assists[a]);
      }
    }
    if (e.kind == KeyEventKind::death && !e.death) {
      c.add("death_detail_missing", join(path, "death"), "death event lacks death detail");
    }
    if (e.kind != KeyEventKind::death && e.death) {
      c.add("death_detail_unexpected", join(path, "death"), "only death events carry death detail");
    }
    if (e.death) {
      const DeathRecord& d = *e.death;
      const std::string dpath = join(path, "death");
      if (!known(d.victim)) c.add("unknown_player_ref", join(dpath, "victim"), "unknown victim " + d.victim);
      c.non_negative(d.player_to_hero, join(dpath, "p2h"));
      c.non_negative(d.player_to_turret, join(dpath, "p2t"));
      c.non_negative(d.hero_to_player, join(dpath, "h2p"));
      c.non_negative(d.turret_to_player, join(dpath, "t2p"));
      c.non_negative(static_cast<double>(d.hero_number_to_player), join(dpath, "hero_count"));
      if (d.hero_to_player == 0.0 && d.hero_number_to_player != 0) {
        c.add("hero_count_without_damage", join(dpath, "hero_count"),
              "hero_count must be 0 when h2p is 0");
      }
    }
  }
}

void validate_frames(const MatchRecord& m, Checker& c) {
  const auto expected = static_cast<std::size_t>(frame_count(m.duration_s));
  if (m.frames.size() != expected) {
    c.add("frame_count", "frames",
          "frames: expected " + std::to_string(expected) + ", got " + std::to_string(m.frames.size()));
  }
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    const TimeSeriesFrame& f = m.frames[i];
    const std::string path = index_path("frames", i);
    if (f.interval_index != static_cast<std::int64_t>(i)) {
      c.add("frame_index", join(path, "i"), path + ".i must equal " + std::to_string(i));
    }
    if (f.per_player.size() != m.players.size()) {
      c.add("frame_width", join(path, "per_player"), "per_player must cover every player");
      continue;
    }
    for (std::size_t p = 0; p < f.per_player.size(); ++p) {
      const std::string ppath = path + ".per_player." + m.players[p].player_id;
      const PlayerFrame& cur = f.per_player[p];
      for (const auto& fld : kFrameReals) c.non_negative(cur.*fld.member, ppath + "." + fld.key);
      for (const auto& fld : kFrameInts) {
        c.non_negative(static_cast<double>(cur.*fld.member), ppath + "." + fld.key);
      }
      if (i == 0 || m.frames[i - 1].per_player.size() != f.per_player.size()) continue;
      const PlayerFrame& prev = m.frames[i - 1].per_player[p];
      for (const auto& fld : kFrameReals) {
        if (cur.*fld.member < prev.*fld.member) {
          c.add("cumulative_decrease", ppath + "." + fld.key,
                path + "." + fld.key + " non-decreasing violated for " + m.players[p].player_id);
        }
      }
      for (const auto& fld : kFrameInts) {
        if (cur.*fld.member < prev.*fld.member) {
          c.add("cumulative_decrease", ppath + "." + fld.key,
                path + "." + fld.key + " non-decreasing violated for " + m.players[p].player_id);
        }
      }
    }
  }
}

void validate_movement(const MatchRecord& m, Checker& c) {
  const auto expected = static_cast<std::size_t>(movement_sample_count(m.duration_s));
  if (m.movement.size() != expected) {
    c.add("movement_count", "movement",
          "movement: expected " + std::to_string(expected) + ", got " +
              std::to_string(m.movement.size()));
  }
  for (std::size_t k = 0; k < m.movement.size(); ++k) {
    const MovementSample& s = m.movement[k];
    const std::string path = index_path("movement", k);
    if (s.timestamp_s != static_cast<std::int64_t>(k) * kMovementIntervalS) {
      c.add("movement_time", join(path, "t"), path + ".t must be " + std::to_string(k * 10));
    }
    if (s.positions.size() != m.players.size()) {
      c.add("movement_width", join(path, "per_player"), "per_player must cover every player");
      continue;
    }
    for (std::size_t p = 0; p < s.positions.size(); ++p) {
      c.in_unit_square(s.positions[p], path + ".per_player." + m.players[p].player_id + ".pos");
    }
  }
}

}  // namespace

std::vector<Violation> validate_match(const MatchRecord& m) {
  Checker c;
  if (m.schema != kSchemaVersion) c.add("schema_version", "schema", "unsupported schema " + m.schema);
  if (m.match_id.empty()) c.add("empty_id", "match_id", "match_id is empty");
  if (m.duration_s <= 0) c.add("duration_nonpositive", "duration_s", "duration_s must be > 0");
  if (m.ended_at < 0) c.add("negative_value", "ended_at", "ended_at must be >= 0");
  validate_players(m, c);
  validate_events(m, c);
  validate_frames(m, c);
  validate_movement(m, c);
  return c.take();
}

MatchRecord parse_match(std::string_view document) {
  Json j;
  try {
    j = Json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::malformed_document, "$", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("$", "expected a match object");

  MatchRecord m;
  m.schema = get_string(j, "schema", "$");
  if (m.schema != kSchemaVersion) schema_error("schema", "unsupported schema '" + m.schema + "'");
  m.match_id = get_string(j, "match_id", "$");
  m.duration_s = get_int(j, "duration_s", "$");
  if (auto it = j.find("ended_at"); it != j.end()) {
    if (!it->is_number_integer()) schema_error("ended_at", "expected integer");
    m.ended_at = it->get<std::int64_t>();
  }

  const Json& players = get_array(j, "players", "$");
  if (players.size() != kPlayersPerMatch) {
    schema_error("players", "expected 10, got " + std::to_string(players.size()));
  }
  for (std::size_t i = 0; i < players.size(); ++i) {
    m.players.push_back(parse_player(players[i], index_path("players", i)));
  }
  {
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < m.players.size(); ++i) {
      if (!ids.insert(m.players[i].player_id).second) {
        schema_error(index_path("players", i) + ".player_id",
                     "duplicate player " + m.players[i].player_id);
      }
    }
  }

  const Json& events = get_array(j, "key_events", "$");
  for (std::size_t i = 0; i < events.size(); ++i) {
    m.key_events.push_back(parse_event(events[i], index_path("key_events", i)));
  }

  const Json& frames = get_array(j, "frames", "$");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string path = index_path("frames", i);
    TimeSeriesFrame f;
    f.interval_index = get_int(frames[i], "i", path);
    f.per_player = parse_per_player<PlayerFrame>(require(frames[i], "per_player", path),
                                                 path + ".per_player", m.players,
                                                 parse_player_frame);
    m.frames.push_back(std::move(f));
  }

  const Json& movement = get_array(j, "movement", "$");
  for (std::size_t k = 0; k < movement.size(); ++k) {
    const std::string path = index_path("movement", k);
    MovementSample s;
    s.timestamp_s = get_int(movement[k], "t", path);
    s.positions = parse_per_player<Point>(
        require(movement[k], "per_player", path), path + ".per_player", m.players,
        [](const Json& pj, const std::string& ppath) { return get_point(pj, "pos", ppath); });
    m.movement.push_back(std::move(s));
  }

  auto violations = validate_match(m);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Error(ErrorCode::invariant_violation, v.path, v.message);
  }
  return m;
}

std::string serialize_match(const MatchRecord& m) {
  Json j;
  j["schema"] = m.schema;
  j["match_id"] = m.match_id;
  j["duration_s"] = m.duration_s;
  j["ended_at"] = m.ended_at;
  Json players = Json::array();
  for (const auto& p : m.players) players.push_back(player_json(p));
  j["players"] = std::move(players);

  Json events = Json::array();
  for (const auto& e : m.key_events) events.push_back(event_json(e));
  j["key_events"] = std::move(events);

  Json frames = Json::array();
  for (const auto& f : m.frames) {
    Json per_player = Json::object();
    for (std::size_t p = 0; p < f.per_player.size() && p < m.players.size(); ++p) {
      Json pf = Json::object();
      for (const auto& fld : kFrameReals) pf[fld.key] = f.per_player[p].*fld.member;
      for (const auto& fld : kFrameInts) pf[fld.key] = f.per_player[p].*fld.member;
      per_player[m.players[p].player_id] = std::move(pf);
    }
    frames.push_back({{"i", f.interval_index}, {"per_player", std::move(per_player)}});
  }
  j["frames"] = std::move(frames);

  Json movement = Json::array();
  for (const auto& s : m.movement) {
    Json per_player = Json::object();
    for (std::size_t p = 0; p < s.positions.size() && p < m.players.size(); ++p) {
      per_player[m.players[p].player_id] = {{"pos", point_json(s.positions[p])}};
    }
    movement.push_back({{"t", s.timestamp_s}, {"per_player", std::move(per_player)}});
  }
  j["movement"] = std::move(movement);
  return j.dump();
}

}  // namespace actorlens
