#include "cli.hpp"

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "actorlens/api.hpp"
#include "actorlens/detect.hpp"
#include "actorlens/error.hpp"
#include "actorlens/metrics.hpp"
#include "actorlens/store.hpp"
#include "actorlens/synth.hpp"
#include "json.hpp"

namespace actorlens {

namespace {

std::string default_data_dir() {
  const char* env = std::getenv("ACTORLENS_DATA_DIR");
  return env && *env ? env : "actorlens-data";
}

std::vector<MatchRecord> read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, path, "cannot open " + path);
  std::vector<MatchRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_match(line));
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no),
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// Writes to --out when given, else to the output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorCode::io_failure, path, "cannot write " + path);
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorCode::io_failure, path_, "write failed for " + path_);
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

void on_signal(int) { stop_server(); }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Actor detection and labeling toolkit for match telemetry", "actorlens"};
  app.require_subcommand(1);

  std::string in_path;
  std::string out_path;
  std::uint64_t seed = 1;
  std::size_t n_matches = 60;
  std::string mix = "normal=0.8,afk=0.1,feeder=0.1";
  DetectorConfig detector;
  int port = 8080;
  std::string data_dir = default_data_dir();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and its ground-truth sidecar");
  synth->add_option("--out", out_path, "Corpus path (sidecar goes to <stem>.truth.jsonl)")->required();
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--matches", n_matches, "Number of matches")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--mix", mix, "Archetype frequencies, e.g. normal=0.8,afk=0.1,feeder=0.1")->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Ingest a telemetry corpus into the store");
  ingest->add_option("--in", in_path, "Corpus (JSON Lines)")->required();
  ingest->add_option("--data-dir", data_dir, "Store root (default $ACTORLENS_DATA_DIR)")->capture_default_str();

  auto add_thresholds = [&](CLI::App* cmd) {
    cmd->add_option("--afk-threshold", detector.afk_threshold_s, "Idle seconds for AFK")->capture_default_str();
    cmd->add_option("--ratio-threshold", detector.feeder_ratio_threshold, "Damage ratio for disguised resistance")
        ->capture_default_str();
    cmd->add_option("--count-threshold", detector.feeder_count_threshold, "Suspected deaths for a feeder")
        ->capture_default_str();
  };
  auto* detect = app.add_subcommand("detect", "Write the low-level actor detection report (JSON Lines)");
  detect->add_option("--in", in_path, "Corpus (JSON Lines)")->required();
  detect->add_option("--out", out_path, "Report path (default: standard output)");
  add_thresholds(detect);

  auto* metrics = app.add_subcommand("metrics", "Write per-member metric vectors as CSV");
  metrics->add_option("--in", in_path, "Corpus (JSON Lines)")->required();
  metrics->add_option("--out", out_path, "CSV path (default: standard output)");

  auto* label_export = app.add_subcommand("label-export", "Export current labels as CSV");
  label_export->add_option("--data-dir", data_dir, "Store root (default $ACTORLENS_DATA_DIR)")->capture_default_str();
  label_export->add_option("--out", out_path, "CSV path (default: standard output)");

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--port", port, "Listen port")->capture_default_str()->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--data-dir", data_dir, "Store root (default $ACTORLENS_DATA_DIR)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }

  if (detect->parsed()) {
    try {
      detector.validate();
    } catch (const Error& e) {
      err << "error [" << to_string(e.code()) << "] " << e.path() << ": " << e.what() << '\n' << detect->help();
      return 2;
    }
  }

  try {
    if (synth->parsed()) {
      const Corpus corpus = generate_corpus(n_matches, parse_mix(mix), seed);
      const auto truth = truth_path_for(out_path);
      write_corpus(corpus, out_path, truth);
      out << nlohmann::json{{"matches", corpus.matches.size()},
                            {"player_matches", corpus.truth.size()},
                            {"corpus", out_path},
                            {"truth", truth.string()}}
                 .dump()
          << '\n';
    } else if (ingest->parsed()) {
      Store store(data_dir);
      const IngestReport r = store.ingest_file(in_path);
      nlohmann::json errors = nlohmann::json::array();
      for (const auto& e : r.errors) {
        errors.push_back({{"line", e.line}, {"code", e.code}, {"path", e.path}, {"message", e.message}});
        err << in_path << ":" << e.line << ": " << e.message << '\n';
      }
      out << nlohmann::json{{"matches", r.matches},
                            {"player_matches", r.player_matches},
                            {"skipped", r.skipped},
                            {"errors", errors}}
                 .dump()
          << '\n';
    } else if (detect->parsed()) {
      const auto matches = read_corpus(in_path);
      const LowLevelPartition part = filter_low_level(matches, detector);
      Sink sink(out_path, out);
      for (const auto& row : part.rows) sink.stream() << detection_report_line(row, detector) << '\n';
      sink.finish();
    } else if (metrics->parsed()) {
      const auto matches = read_corpus(in_path);
      Sink sink(out_path, out);
      auto& s = sink.stream();
      s << "match_id,player_id";
      for (auto name : metric_names()) s << ',' << name;
      s << '\n';
      std::vector<std::pair<MemberKey, MetricVector>> rows;
      for (const auto& m : matches) {
        for (std::size_t p = 0; p < m.players.size(); ++p) {
          rows.push_back({{m.match_id, m.players[p].player_id}, metric_vector(m, p)});
        }
      }
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [key, v] : rows) {
        s << key.match_id << ',' << key.player_id;
        for (auto c : v.priority_counts) s << ',' << c;
        s << ',' << nlohmann::json(v.inactive_percentage).dump() << ',' << v.report_count << '\n';
      }
      sink.finish();
    } else if (label_export->parsed()) {
      Store store(data_dir);
      Sink sink(out_path, out);
      sink.stream() << store.export_labels_csv();
      sink.finish();
    } else if (serve_cmd->parsed()) {
      Store store(data_dir);
      Service service(store);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      err << "serving " << data_dir << " on port " << port << '\n';
      if (!serve(service, "0.0.0.0", port)) {
        err << "error: cannot bind port " << port << '\n';
        return 1;
      }
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "] " << e.path() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace actorlens
