#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "actorlens/features.hpp"

namespace testsupport {

using namespace actorlens;

MatchRecord blank_match(std::int64_t duration_s, const std::string& match_id) {
  MatchRecord m;
  m.match_id = match_id;
  m.duration_s = duration_s;
  m.ended_at = 1700000000;
  const Lane lanes[5] = {Lane::top, Lane::mid, Lane::bottom, Lane::jungle, Lane::support};
  const char* types[5] = {"fighter", "mage", "marksman", "assassin", "support"};
  for (std::size_t i = 0; i < kPlayersPerMatch; ++i) {
    PlayerMatch p;
    p.player_id = "P" + std::to_string(i);
    p.team = i < 5 ? Team::blue : Team::red;
    p.hero_id = "H" + std::to_string(i);
    p.hero_type = types[i % 5];
    p.lane = lanes[i % 5];
    p.summary.battle_result = i < 5 ? BattleResult::win : BattleResult::loss;
    m.players.push_back(p);
  }
  for (std::int64_t f = 0; f < frame_count(duration_s); ++f) {
    m.frames.push_back({f, std::vector<PlayerFrame>(kPlayersPerMatch)});
  }
  for (std::int64_t k = 0; k < movement_sample_count(duration_s); ++k) {
    MovementSample s;
    s.timestamp_s = k * kMovementIntervalS;
    for (std::size_t i = 0; i < kPlayersPerMatch; ++i) {
      const double off = 0.01 * static_cast<double>(i % 5);
      s.positions.push_back(i < 5 ? Point{0.05 + off, 0.05} : Point{0.95 - off, 0.95});
    }
    m.movement.push_back(std::move(s));
  }
  return m;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("actorlens-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string corpus_text(const std::vector<MatchRecord>& matches) {
  std::string out;
  for (const auto& m : matches) out += serialize_match(m) + "\n";
  return out;
}

std::string snapshot(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::ostringstream out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    out << std::filesystem::relative(f, root).generic_string() << '\n' << in.rdbuf() << '\n';
  }
  return out.str();
}

namespace oracle {

std::vector<DeathRecord> death_grid() {
  const double levels[] = {0, 1, 100, 1000};
  const std::int64_t heroes[] = {0, 1, 2, 3, 5};
  std::vector<DeathRecord> out;
  for (double p2h : levels)
    for (double p2t : levels)
      for (double h2p : levels)
        for (double t2p : levels)
          for (std::int64_t n : heroes)
            for (bool in_turret : {true, false}) {
              if (h2p == 0 && n != 0) continue;
              DeathRecord d;
              d.victim = "P0";
              d.player_to_hero = p2h;
              d.player_to_turret = p2t;
              d.hero_to_player = h2p;
              d.turret_to_player = t2p;
              d.hero_number_to_player = n;
              d.dead_in_turret = in_turret;
              out.push_back(d);
            }
  return out;
}

std::set<std::string> death_reasons(double p2h, double p2t, double h2p, double t2p, std::int64_t heroes,
                                    bool in_turret, double ratio) {
  std::set<std::string> out;
  const bool dealt_hero = p2h != 0;
  const bool took_hero = h2p != 0;
  if ((p2t == 0 && !dealt_hero && !took_hero && t2p != 0) || (!dealt_hero && took_hero && in_turret)) {
    out.insert("turret_diving");
  }
  if (!dealt_hero && took_hero && !in_turret && heroes >= 3) out.insert("overextending");
  const double received = h2p + t2p;
  if (received > 0) {
    const double dealt = p2h + p2t;
    if (dealt / received <= ratio) out.insert("disguise_resistance");
  }
  return out;
}

EventKind first_by_rank(std::uint16_t bits) {
  static const EventKind order[9] = {
      EventKind::turret_destruction, EventKind::dragon_killing, EventKind::hero_killing,
      EventKind::death,              EventKind::assist,         EventKind::poke,
      EventKind::monster_killing,    EventKind::minion_killing, EventKind::inaction};
  for (int r = 0; r < 9; ++r) {
    if (bits & (1u << r)) return order[r];
  }
  return EventKind::inaction;
}

namespace {

// Value at a 1-based depth that may end in .5, counted from the bottom.
double at_depth(const std::vector<double>& sorted, double depth) {
  const auto whole = static_cast<std::size_t>(depth);
  if (depth == static_cast<double>(whole)) return sorted[whole - 1];
  return (sorted[whole - 1] + sorted[whole]) / 2.0;
}

}  // namespace

Hinges tukey(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double median_depth = (n + 1.0) / 2.0;
  const double hinge_depth = (std::floor(median_depth) + 1.0) / 2.0;
  std::vector<double> reversed(values.rbegin(), values.rend());
  return {values.front(), at_depth(values, hinge_depth), at_depth(values, median_depth),
          at_depth(reversed, hinge_depth), values.back()};
}

}  // namespace oracle

std::vector<MemberSeries> random_cohort(std::mt19937_64& rng, std::size_t members) {
  std::uniform_int_distribution<int> len(1, 30);
  std::discrete_distribution<int> kind({1, 1, 2, 2, 3, 4, 3, 8, 5});
  std::uniform_int_distribution<int> econ(-6, 6);
  std::vector<MemberSeries> out;
  for (std::size_t i = 0; i < members; ++i) {
    MemberSeries s;
    s.key = {"m" + std::to_string(i / 10), "P" + std::to_string(i % 10)};
    const int n = len(rng);
    for (int t = 0; t < n; ++t) {
      s.priority.push_back(static_cast<EventKind>(kind(rng)));
      s.economic_difference.push_back(100.0 * econ(rng));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LabeledExample> threshold_feature_corpus(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto idx = [](const char* name) { return *feature_index(name); };
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledExample e;
    e.key = {"f" + std::to_string(i / 10), "P" + std::to_string(i % 10)};
    for (auto& v : e.features) v = std::floor(unit(rng) * 5000.0);
    e.features[idx("playerherotype")] = std::floor(unit(rng) * 7.0);
    e.features[idx("battleresult")] = unit(rng) < 0.5 ? 0.0 : 1.0;
    for (const char* r : {"dmgtohero_teams_per", "kills_teams_per", "assistant_teams_per", "coin_teams_per"}) {
      e.features[idx(r)] = unit(rng) * 0.5;
    }
    const double idle = unit(rng) * 0.2;
    const double die = unit(rng) * 0.6;
    e.features[idx("idle_time_per")] = idle;
    e.features[idx("die_teams_per")] = die;
    e.features[idx("gametime")] = 900.0 + std::floor(unit(rng) * 900.0);
    e.features[idx("idle_time")] = std::round(idle * e.features[idx("gametime")]);
    e.label = idle >= 0.1 || die >= 0.45 ? Label::actor : Label::normal;
    out.push_back(e);
  }
  return out;
}

std::vector<MetricArray> two_clusters(std::mt19937_64& rng, std::size_t per_cluster) {
  std::uniform_real_distribution<double> jitter(-0.03, 0.03);
  std::vector<MetricArray> out;
  for (int g = 0; g < 2; ++g) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      MetricArray v{};
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = (g == 0 ? 0.2 : 0.8) + jitter(rng);
      out.push_back(v);
    }
  }
  return out;
}

double neighbour_recall(const std::vector<Point>& layout, const std::vector<int>& group) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    std::size_t best = i;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < layout.size(); ++j) {
      if (j == i) continue;
      const double d = std::hypot(layout[i].x - layout[j].x, layout[i].y - layout[j].y);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    hits += group[best] == group[i];
  }
  return static_cast<double>(hits) / static_cast<double>(layout.size());
}

std::size_t two_means_errors(const std::vector<Point>& layout, const std::vector<int>& group) {
  // Seed with the two points farthest apart, then plain Lloyd iterations.
  std::size_t a = 0, b = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.size(); ++j) {
      const double d = std::hypot(layout[i].x - layout[j].x, layout[i].y - layout[j].y);
      if (d > far) {
        far = d;
        a = i;
        b = j;
      }
    }
  }
  Point c[2] = {layout[a], layout[b]};
  std::vector<int> assign(layout.size(), 0);
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const double d0 = std::hypot(layout[i].x - c[0].x, layout[i].y - c[0].y);
      const double d1 = std::hypot(layout[i].x - c[1].x, layout[i].y - c[1].y);
      assign[i] = d1 < d0 ? 1 : 0;
    }
    Point sum[2] = {};
    double n[2] = {0, 0};
    for (std::size_t i = 0; i < layout.size(); ++i) {
      sum[assign[i]].x += layout[i].x;
      sum[assign[i]].y += layout[i].y;
      n[assign[i]] += 1;
    }
    for (int k = 0; k < 2; ++k) {
      if (n[k] > 0) c[k] = {sum[k].x / n[k], sum[k].y / n[k]};
    }
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) same += assign[i] == group[i];
  return std::min(same, layout.size() - same);
}

double min_pairwise_distance(const std::vector<Point>& layout) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.size(); ++j) {
      best = std::min(best, std::hypot(layout[i].x - layout[j].x, layout[i].y - layout[j].y));
    }
  }
  return best;
}

std::string cohort_summary_problem(const std::vector<MemberSeries>& members, const ProgressionSummary& summary) {
  std::size_t minutes = 0;
  for (const auto& m : members) minutes = std::max(minutes, m.priority.size());
  auto where = [](const char* what, std::size_t t) { return std::string(what) + " at minute " + std::to_string(t); };

  std::size_t di = 0, fi = 0, bi = 0;
  for (std::size_t t = 0; t < minutes; ++t) {
    std::vector<double> econ;
    std::map<EventKind, std::int64_t> present;
    std::map<std::pair<EventKind, EventKind>, std::int64_t> moves;
    std::int64_t at_t = 0, both = 0;
    for (const auto& m : members) {
      if (t < m.economic_difference.size()) econ.push_back(m.economic_difference[t]);
      if (t < m.priority.size()) {
        ++at_t;
        ++present[m.priority[t]];
      }
      if (t + 1 < m.priority.size()) {
        ++both;
        ++moves[{m.priority[t], m.priority[t + 1]}];
      }
    }
    if (at_t > 0) {
      if (di >= summary.flow.distributions.size()) return where("missing distribution", t);
      const auto& d = summary.flow.distributions[di++];
      if (d.minute_index != static_cast<std::int64_t>(t) || d.members != at_t) return where("distribution header", t);
      double total = 0.0;
      for (EventKind k : kAllEventKinds) {
        const auto expect = present.count(k) ? present[k] : 0;
        if (d.counts[rank(k)] != expect) return where("distribution count", t);
        total += d.shares[rank(k)];
      }
      if (std::abs(total - 1.0) > 1e-9) return where("distribution sum", t);
    }
    if (both > 0) {
      if (fi >= summary.flow.flows.size()) return where("missing flow", t);
      const auto& f = summary.flow.flows[fi++];
      if (f.minute_index != static_cast<std::int64_t>(t) || f.members != both) return where("flow header", t);
      double total = 0.0;
      for (EventKind a : kAllEventKinds) {
        std::int64_t row = 0;
        for (EventKind b : kAllEventKinds) {
          const auto expect = moves.count({a, b}) ? moves[{a, b}] : 0;
          if (f.counts[rank(a)][rank(b)] != expect) return where("flow count", t);
          row += f.counts[rank(a)][rank(b)];
          total += f.shares[rank(a)][rank(b)];
        }
        // Row marginal equals the distribution restricted to members that
        // are still playing at t+1.
        std::int64_t restricted = 0;
        for (const auto& m : members) {
          if (t + 1 < m.priority.size() && m.priority[t] == a) ++restricted;
        }
        if (row != restricted) return where("flow marginal", t);
      }
      if (std::abs(total - 1.0) > 1e-9) return where("flow sum", t);
    }
    if (!econ.empty()) {
      if (bi >= summary.economic_difference.size()) return where("missing box", t);
      const auto& b = summary.economic_difference[bi++];
      const auto h = oracle::tukey(econ);
      if (b.count != econ.size() || b.min != h.min || b.q1 != h.q1 || b.median != h.median || b.q3 != h.q3 ||
          b.max != h.max) {
        return where("box stats", t);
      }
      if (!(b.min <= b.q1 && b.q1 <= b.median && b.median <= b.q3 && b.q3 <= b.max)) return where("box order", t);
    }
  }
  if (di != summary.flow.distributions.size() || fi != summary.flow.flows.size() ||
      bi != summary.economic_difference.size()) {
    return "summary has extra minutes";
  }
  return {};
}

}  // namespace testsupport
