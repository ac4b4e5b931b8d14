#include "actorlens/cohort.hpp"

#include <algorithm>

#include "actorlens/error.hpp"
#include "actorlens/metrics.hpp"

namespace actorlens {

std::string_view to_string(CohortMode mode) {
  switch (mode) {
    case CohortMode::lasso: return "lasso";
    case CohortMode::history: return "history";
    case CohortMode::hero: return "hero";
  }
  return "lasso";
}

std::optional<CohortMode> parse_cohort_mode(std::string_view text) {
  for (CohortMode m : {CohortMode::lasso, CohortMode::history, CohortMode::hero}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

namespace {

std::string key_path(const MemberKey& k) { return k.match_id + "/" + k.player_id; }

const MemberInfo& find_anchor(const std::optional<MemberKey>& anchor, std::span<const MemberInfo> catalog) {
  if (!anchor) throw Error(ErrorCode::unknown_anchor, "anchor", "anchor is required for this cohort mode");
  for (const auto& info : catalog) {
    if (info.key == *anchor) return info;
  }
  throw Error(ErrorCode::unknown_anchor, "anchor", "anchor " + key_path(*anchor) + " is not stored");
}

}  // namespace

Cohort build_cohort(CohortMode mode, const std::optional<MemberKey>& anchor, std::span<const MemberKey> selection,
                    std::span<const MemberInfo> catalog, std::size_t history_limit) {
  Cohort c;
  c.mode = mode;
  switch (mode) {
    case CohortMode::lasso: {
      if (selection.empty()) throw Error(ErrorCode::empty_selection, "members", "lasso selection is empty");
      std::vector<MemberKey> known;
      known.reserve(catalog.size());
      for (const auto& info : catalog) known.push_back(info.key);
      std::sort(known.begin(), known.end());
      c.members.assign(selection.begin(), selection.end());
      std::sort(c.members.begin(), c.members.end());
      c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
      for (const auto& k : c.members) {
        if (!std::binary_search(known.begin(), known.end(), k)) {
          throw Error(ErrorCode::unknown_member, "members", "unknown member " + key_path(k));
        }
      }
      return c;
    }
    case CohortMode::history: {
      const MemberInfo& a = find_anchor(anchor, catalog);
      c.anchor = a.key;
      std::vector<const MemberInfo*> rows;
      for (const auto& info : catalog) {
        if (info.key.player_id == a.key.player_id) rows.push_back(&info);
      }
      std::sort(rows.begin(), rows.end(), [](const MemberInfo* x, const MemberInfo* y) {
        if (x->ended_at != y->ended_at) return x->ended_at > y->ended_at;
        return x->key.match_id < y->key.match_id;
      });
      // Keep the anchor even when it falls outside the limit.
      std::vector<MemberKey> out;
      bool anchor_in = false;
      for (const auto* r : rows) {
        if (out.size() >= history_limit) break;
        anchor_in |= r->key == a.key;
        out.push_back(r->key);
      }
      if (!anchor_in) {
        if (!out.empty() && out.size() >= history_limit) out.pop_back();
        out.push_back(a.key);
      }
      c.members = std::move(out);
      return c;
    }
    case CohortMode::hero: {
      const MemberInfo& a = find_anchor(anchor, catalog);
      c.anchor = a.key;
      for (const auto& info : catalog) {
        if (info.hero_id == a.hero_id && info.key.player_id != a.key.player_id) c.members.push_back(info.key);
      }
      std::sort(c.members.begin(), c.members.end());
      return c;
    }
  }
  return c;
}

namespace {

double median_of(const std::vector<double>& sorted, std::size_t from, std::size_t to) {
  const std::size_t n = to - from;
  const std::size_t mid = from + n / 2;
  return n % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
}

}  // namespace

BoxStats tukey_box(std::int64_t minute_index, std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::empty_selection, "values", "box statistics need at least one value");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  BoxStats b;
  b.minute_index = minute_index;
  b.count = n;
  b.min = values.front();
  b.max = values.back();
  b.median = median_of(values, 0, n);
  b.q1 = median_of(values, 0, (n + 1) / 2);
  b.q3 = median_of(values, n / 2, n);
  return b;
}

MemberSeries member_series(const MatchRecord& match, std::size_t player_index) {
  MemberSeries s;
  s.key = {match.match_id, match.players.at(player_index).player_id};
  s.economic_difference = economic_difference_series(match, player_index);
  s.priority = priority_sequence(abstract_minutes(match, player_index));
  return s;
}

ProgressionSummary progression_summary(std::span<const MemberSeries> members) {
  ProgressionSummary out;
  std::size_t minutes = 0;
  for (const auto& m : members) minutes = std::max({minutes, m.priority.size(), m.economic_difference.size()});

  for (std::size_t t = 0; t < minutes; ++t) {
    std::vector<double> values;
    for (const auto& m : members) {
      if (t < m.economic_difference.size()) values.push_back(m.economic_difference[t]);
    }
    if (!values.empty()) out.economic_difference.push_back(tukey_box(static_cast<std::int64_t>(t), std::move(values)));

    MinuteDistribution d;
    d.minute_index = static_cast<std::int64_t>(t);
    for (const auto& m : members) {
      if (t >= m.priority.size()) continue;
      ++d.counts[rank(m.priority[t])];
      ++d.members;
    }
    if (d.members > 0) {
      for (std::size_t k = 0; k < kEventKindCount; ++k) {
        d.shares[k] = static_cast<double>(d.counts[k]) / static_cast<double>(d.members);
      }
      out.flow.distributions.push_back(d);
    }

    MinuteFlow f;
    f.minute_index = static_cast<std::int64_t>(t);
    for (const auto& m : members) {
      if (t + 1 >= m.priority.size()) continue;
      ++f.counts[rank(m.priority[t])][rank(m.priority[t + 1])];
      ++f.members;
    }
    if (f.members > 0) {
      for (std::size_t a = 0; a < kEventKindCount; ++a) {
        for (std::size_t b = 0; b < kEventKindCount; ++b) {
          f.shares[a][b] = static_cast<double>(f.counts[a][b]) / static_cast<double>(f.members);
        }
      }
      out.flow.flows.push_back(f);
    }
  }
  return out;
}

std::vector<MemberKey> filter_by_flow(std::span<const MemberSeries> members, std::int64_t t, EventKind e1,
                                      EventKind e2) {
  std::vector<MemberKey> out;
  if (t < 0) return out;
  const auto i = static_cast<std::size_t>(t);
  for (const auto& m : members) {
    if (i + 1 < m.priority.size() && m.priority[i] == e1 && m.priority[i + 1] == e2) out.push_back(m.key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace actorlens
