#pragma once

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockcast/channel.hpp"

namespace blockcast {

constexpr const char* kVersion = "0.1.0";

// CSV with 17 significant digits everywhere so reproducibility checks can be
// byte-exact.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os_ << ',';
      os_ << cols[i];
    }
    os_ << '\n';
  }

  CsvWriter& field(double v) {
    sep();
    os_ << format_double17(v);
    return *this;
  }
  CsvWriter& field(int v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvWriter& field(std::int64_t v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvWriter& field(bool v) {
    sep();
    os_ << (v ? 1 : 0);
    return *this;
  }
  CsvWriter& field(const std::string& v) {
    sep();
    os_ << v;
    return *this;
  }

  void endrow() {
    os_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  bool first_ = true;
};

// One manifest per run: parameter echo, seed, version, wall time, outputs.
// Re-running the recorded subcommand with the recorded parameters reproduces
// the CSV bodies byte-exactly for deterministic subcommands (wall time is the
// only field that varies).
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0;
  std::vector<std::string> output_paths;

  std::string to_json() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    j["parameters"] = params;
    j["seed"] = seed;
    j["tool_version"] = kVersion;
    j["wall_time_seconds"] = wall_time_seconds;
    j["output_paths"] = output_paths;
    return j.dump(2);
  }
};

class WallClock {
 public:
  WallClock() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace blockcast
