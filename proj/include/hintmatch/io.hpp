#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hintmatch/market.hpp"

namespace hintmatch {

using json = nlohmann::json;

/// Shortest round-trip-stable text for a double; identical inputs give identical bytes.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline json reward_to_json(const RewardModel& model) {
  json j{{"kind", std::string(to_string(model.kind))}};
  if (model.kind == RewardKind::gaussian) j["sigma"] = model.sigma;
  return j;
}

inline RewardModel reward_from_json(const json& j) {
  RewardModel model;
  if (!j.is_object()) throw InputError("field 'reward': expected an object");
  if (j.contains("kind")) model.kind = parse_reward_kind(j.at("kind").get<std::string>());
  if (j.contains("sigma")) model.sigma = j.at("sigma").get<double>();
  return model;
}

/// {"agent_means": [[...] x n], "firm_means": [[...] x m], "reward": {...}}
inline json market_to_json(const Market& market) {
  json agents = json::array();
  for (int a = 0; a < market.agents(); ++a) {
    const auto row = market.agent_row(a);
    agents.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json firms = json::array();
  for (int f = 0; f < market.firms(); ++f) {
    const auto row = market.firm_row(f);
    firms.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"agent_means", agents}, {"firm_means", firms}, {"reward", reward_to_json(market.reward_model())}};
}

inline Market market_from_json(const json& j) {
  try {
    const auto agents = j.at("agent_means").get<std::vector<std::vector<double>>>();
    const auto firms = j.at("firm_means").get<std::vector<std::vector<double>>>();
    const RewardModel reward = j.contains("reward") ? reward_from_json(j.at("reward")) : RewardModel{};
    const int n = static_cast<int>(agents.size());
    const int m = static_cast<int>(firms.size());
    std::vector<double> am;
    std::vector<double> fm;
    for (const auto& row : agents) {
      if (static_cast<int>(row.size()) != m) throw InputError("agent_means rows must have one entry per firm");
      am.insert(am.end(), row.begin(), row.end());
    }
    for (const auto& row : firms) {
      if (static_cast<int>(row.size()) != n) throw InputError("firm_means rows must have one entry per agent");
      fm.insert(fm.end(), row.begin(), row.end());
    }
    return Market(n, m, std::move(am), std::move(fm), reward);
  } catch (const json::exception& e) {
    throw InputError(std::string("market file: ") + e.what());
  }
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

inline Market load_market(const std::filesystem::path& path) { return market_from_json(read_json(path)); }

inline void save_market(const Market& market, const std::filesystem::path& path) {
  write_text(path, market_to_json(market).dump(2) + "\n");
}

/// Minimal CSV writer; fields are written verbatim, so callers avoid commas.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) out_ << ',';
      out_ << fields[k];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

/// Firm list rendered as 1-based ids joined by ';'.
inline std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) s += ';';
    s += ids[k] < 0 ? std::string("-") : std::to_string(ids[k] + 1);
  }
  return s;
}

}  // namespace hintmatch
