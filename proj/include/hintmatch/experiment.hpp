#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "hintmatch/centralized.hpp"
#include "hintmatch/decentralized.hpp"
#include "hintmatch/engine.hpp"
#include "hintmatch/examples.hpp"
#include "hintmatch/generate.hpp"
#include "hintmatch/hinted_bandits.hpp"
#include "hintmatch/io.hpp"
#include "hintmatch/metrics.hpp"

namespace hintmatch {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kOutputEnv = "HINTMATCH_OUT";

enum class Algorithm { cia, drr, ancdrr, eancdrr, allprobe, eap, apem };

inline constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kAlgorithmNames{{
    {Algorithm::cia, "cia"},
    {Algorithm::drr, "drr"},
    {Algorithm::ancdrr, "ancdrr"},
    {Algorithm::eancdrr, "eancdrr"},
    {Algorithm::allprobe, "allprobe"},
    {Algorithm::eap, "eap"},
    {Algorithm::apem, "apem"},
}};

inline std::string_view to_string(Algorithm a) {
  for (const auto& [value, name] : kAlgorithmNames) {
    if (value == a) return name;
  }
  return "?";
}

inline bool single_agent(Algorithm a) {
  return a == Algorithm::allprobe || a == Algorithm::eap || a == Algorithm::apem;
}

struct MarketSource {
  enum class Kind { example, file, generate, arms };
  Kind kind = Kind::example;
  std::string name;              // example
  std::filesystem::path path;    // file
  MarketParams params;           // generate
  bool alpha_reducible = false;  // generate
  std::uint64_t seed = 0;        // generate
  std::vector<double> arms;      // arms
};

struct ExperimentConfig {
  MarketSource market;
  RewardModel reward{};
  Algorithm algorithm = Algorithm::cia;
  FirmMode firms = FirmMode::uncertain;
  bool strategic = true;
  bool oracle_agents = false;
  long horizon = 1000;
  int replications = 1;
  std::uint64_t seed = 1;
  std::optional<double> lambda;
  double epsilon = kDefaultEpsilon;
  int rank = 1;
  long stride = 1;
  bool round_log = false;
  std::optional<std::filesystem::path> output;
};

namespace detail {

inline InputError field_error(const std::string& field, const std::string& what) {
  return InputError("config field '" + field + "': " + what);
}

template <class T>
T get_field(const json& j, const std::string& field) {
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw field_error(field, "missing or of the wrong type");
  }
}

inline void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                           const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw field_error(where + key, "unknown field");
  }
}

inline MarketSource parse_market_source(const json& j, const std::filesystem::path& base_dir,
                                        std::uint64_t default_seed) {
  if (!j.is_object()) throw field_error("market", "expected an object");
  reject_unknown(j, {"example", "file", "generate", "arms"}, "market.");
  if (j.size() != 1) throw field_error("market", "give exactly one of example, file, generate, arms");
  MarketSource src;
  if (j.contains("example")) {
    src.kind = MarketSource::Kind::example;
    src.name = get_field<std::string>(j, "example");
    example_tables(src.name);  // throws with the list of known names
  } else if (j.contains("file")) {
    src.kind = MarketSource::Kind::file;
    src.path = get_field<std::string>(j, "file");
    if (src.path.is_relative()) src.path = base_dir / src.path;
  } else if (j.contains("generate")) {
    const auto& g = j.at("generate");
    if (!g.is_object()) throw field_error("market.generate", "expected an object");
    reject_unknown(g, {"n", "m", "min_gap", "alpha_reducible", "seed"}, "market.generate.");
    src.kind = MarketSource::Kind::generate;
    src.params.n = get_field<int>(g, "n");
    src.params.m = get_field<int>(g, "m");
    src.params.min_gap = g.value("min_gap", 0.1);
    src.alpha_reducible = g.value("alpha_reducible", false);
    src.seed = g.value("seed", default_seed);
  } else {
    src.kind = MarketSource::Kind::arms;
    src.arms = get_field<std::vector<double>>(j, "arms");
    if (src.arms.size() < 2) throw field_error("market.arms", "need at least two arms");
    for (double u : src.arms) {
      if (!(u >= 0.0 && u <= 1.0)) throw field_error("market.arms", "means must lie in [0,1]");
    }
  }
  return src;
}

}  // namespace detail

namespace detail {

inline ExperimentConfig parse_config_fields(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  detail::reject_unknown(j,
                         {"market", "reward", "algorithm", "firms", "strategic", "oracle_agents",
                          "horizon", "replications", "seed", "lambda", "epsilon", "rank", "stride",
                          "round_log", "output"},
                         "");
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", std::uint64_t{1});
  if (!j.contains("market")) throw field_error("market", "missing");
  cfg.market = detail::parse_market_source(j.at("market"), base_dir, cfg.seed);
  if (j.contains("reward")) {
    try {
      cfg.reward = reward_from_json(j.at("reward"));
    } catch (const InputError& e) {
      throw field_error("reward", e.what());
    }
  }
  const auto algo = get_field<std::string>(j, "algorithm");
  bool found = false;
  for (const auto& [value, name] : kAlgorithmNames) {
    if (name == algo) {
      cfg.algorithm = value;
      found = true;
    }
  }
  if (!found) throw field_error("algorithm", "unknown algorithm '" + algo + "'");
  const auto firms = j.value("firms", std::string("uncertain"));
  if (firms == "certain") {
    cfg.firms = FirmMode::certain;
  } else if (firms == "uncertain") {
    cfg.firms = FirmMode::uncertain;
  } else {
    throw field_error("firms", "expected 'certain' or 'uncertain'");
  }
  cfg.strategic = j.value("strategic", true);
  cfg.oracle_agents = j.value("oracle_agents", false);
  cfg.horizon = get_field<long>(j, "horizon");
  if (cfg.horizon < 1) throw field_error("horizon", "must be at least 1");
  cfg.replications = j.value("replications", 1);
  if (cfg.replications < 1) throw field_error("replications", "must be at least 1");
  if (j.contains("lambda")) cfg.lambda = get_field<double>(j, "lambda");
  if (cfg.algorithm == Algorithm::eancdrr) {
    if (!cfg.lambda) throw field_error("lambda", "required for eancdrr");
    if (!(*cfg.lambda > 0.0 && *cfg.lambda < 1.0)) throw field_error("lambda", "must lie in (0,1)");
  } else if (cfg.lambda) {
    throw field_error("lambda", "only used by eancdrr");
  }
  cfg.epsilon = j.value("epsilon", kDefaultEpsilon);
  if (!(cfg.epsilon >= 0.0)) throw field_error("epsilon", "must be non-negative");
  cfg.rank = j.value("rank", 1);
  cfg.stride = j.value("stride", 1L);
  if (cfg.stride < 1) throw field_error("stride", "must be at least 1");
  cfg.round_log = j.value("round_log", false);
  if (j.contains("output")) cfg.output = get_field<std::string>(j, "output");

  if (single_agent(cfg.algorithm)) {
    if (cfg.market.kind == MarketSource::Kind::generate && cfg.market.params.n != 1) {
      throw field_error("market", "single-agent algorithms need a 1-agent market or an arm list");
    }
    if (cfg.market.kind == MarketSource::Kind::example) {
      throw field_error("market", "single-agent algorithms need a 1-agent market or an arm list");
    }
  } else if (cfg.market.kind == MarketSource::Kind::arms) {
    throw field_error("market", "an arm list only suits allprobe, eap or apem");
  }
  return cfg;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir = ".") {
  try {
    return detail::parse_config_fields(j, base_dir);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: field of the wrong type: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json(path), path.parent_path().empty() ? "." : path.parent_path());
}

/// Canonical JSON of every field that affects results (the output directory does not).
inline json config_to_json(const ExperimentConfig& cfg) {
  json market;
  switch (cfg.market.kind) {
    case MarketSource::Kind::example: market["example"] = cfg.market.name; break;
    case MarketSource::Kind::file: market["file"] = cfg.market.path.string(); break;
    case MarketSource::Kind::generate:
      market["generate"] = {{"n", cfg.market.params.n},
                            {"m", cfg.market.params.m},
                            {"min_gap", cfg.market.params.min_gap},
                            {"alpha_reducible", cfg.market.alpha_reducible},
                            {"seed", cfg.market.seed}};
      break;
    case MarketSource::Kind::arms: market["arms"] = cfg.market.arms; break;
  }
  json j{{"market", market},
         {"reward", reward_to_json(cfg.reward)},
         {"algorithm", std::string(to_string(cfg.algorithm))},
         {"firms", cfg.firms == FirmMode::certain ? "certain" : "uncertain"},
         {"strategic", cfg.strategic},
         {"oracle_agents", cfg.oracle_agents},
         {"horizon", cfg.horizon},
         {"replications", cfg.replications},
         {"seed", cfg.seed},
         {"epsilon", cfg.epsilon},
         {"rank", cfg.rank},
         {"stride", cfg.stride},
         {"round_log", cfg.round_log}};
  if (cfg.lambda) j["lambda"] = *cfg.lambda;
  return j;
}

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(cfg).dump())));
  return buf;
}

inline Market build_market(const ExperimentConfig& cfg) {
  const auto& src = cfg.market;
  switch (src.kind) {
    case MarketSource::Kind::example: return named_example(src.name, cfg.reward);
    case MarketSource::Kind::file: return load_market(src.path);
    case MarketSource::Kind::generate: {
      Rng rng(src.seed);
      auto params = src.params;
      params.reward = cfg.reward;
      return src.alpha_reducible ? generate_alpha_reducible(params, rng) : generate_market(params, rng);
    }
    case MarketSource::Kind::arms: break;
  }
  throw InputError("arm lists do not describe a two-sided market");
}

inline ArmBank build_arms(const ExperimentConfig& cfg) {
  if (cfg.market.kind == MarketSource::Kind::arms) return {cfg.market.arms, cfg.reward};
  const auto market = build_market(cfg);
  if (market.agents() != 1) throw InputError("single-agent algorithms need a 1-agent market");
  const auto row = market.agent_row(0);
  return {std::vector<double>(row.begin(), row.end()), market.reward_model()};
}

/// Output directory: explicit override, else the config's, else $HINTMATCH_OUT, else ./hintmatch_out.
inline std::filesystem::path resolve_output(const ExperimentConfig& cfg,
                                            const std::optional<std::filesystem::path>& override_dir) {
  if (override_dir) return *override_dir;
  if (cfg.output) return *cfg.output;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return "hintmatch_out";
}

/// Rounds written to series files: every stride-th round, powers of ten, T/10 and T.
inline bool is_checkpoint(long t, long T) {
  if (t == T || (T >= 10 && t == T / 10)) return true;
  long p = 1;
  while (p < t) p *= 10;
  return p == t;
}

inline std::vector<long> summary_checkpoints(long T) {
  std::vector<long> out;
  for (long p = 1; p <= T; p *= 10) out.push_back(p);
  if (T >= 10) out.push_back(T / 10);
  out.push_back(T);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct ReplicationSummary {
  std::uint64_t seed = 0;
  // [metric][checkpoint][agent]; metrics: realized opt, realized pes, expected opt, expected pes
  std::vector<std::vector<std::vector<double>>> regret;
  std::optional<long> convergence;
  std::vector<int> limit;
  long updating_phases = 0;
  long anomalies = 0;
  long feedback_violations = 0;
  long collisions = 0;            // rounds in which two agents hold the same firm
  long gamma_zero = 0;            // (round, firm) pairs with a strategic rejection
  long repeated_abstentions = 0;  // drr: same firm rejects in consecutive updating rounds
  long imperfect_phases = 0;      // drr: completed updating phases ending imperfect
  std::vector<long> phase_starts; // drr: t_gs of every phase
  int most_pulled = -1;  // bandits, final quarter
};

struct ExperimentResult {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  json summary;
  json manifest;
};

namespace detail {

inline std::string rep_name(const std::string& stem, int rep) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_r%03d.csv", rep);
  return stem + buf;
}

template <class Policy>
ReplicationSummary run_matching_replication(const ExperimentConfig& cfg, const Market& market,
                                            const Baselines& baselines, Policy policy,
                                            std::uint64_t seed, const std::filesystem::path& dir,
                                            int rep, std::vector<std::filesystem::path>& files) {
  const int n = market.agents();
  const int m = market.firms();
  const long T = cfg.horizon;
  SimOptions options;
  options.certain_firms = cfg.firms == FirmMode::certain;
  options.strategic_firms = cfg.strategic;
  options.oracle_agents = cfg.oracle_agents;
  Simulation<Policy> sim(market, std::move(policy), options, seed);

  std::vector<std::string> header{"t"};
  for (const char* prefix : {"opt", "pes", "eopt", "epes"}) {
    for (int a = 1; a <= n; ++a) header.push_back(std::string(prefix) + "_" + std::to_string(a));
  }
  files.push_back(dir / rep_name("series", rep));
  CsvWriter series(files.back(), header);
  std::optional<CsvWriter> rounds;
  std::optional<CsvWriter> firms;
  if (cfg.round_log) {
    files.push_back(dir / rep_name("rounds", rep));
    rounds.emplace(files.back(), std::vector<std::string>{"t", "agent", "interviews", "applications",
                                                          "matched", "reward"});
    files.push_back(dir / rep_name("firms", rep));
    firms.emplace(files.back(), std::vector<std::string>{"t", "firm", "gamma", "vacant", "changed"});
  }

  RegretTracker regret(market, baselines);
  ConvergenceTracker convergence;
  ReplicationSummary out;
  out.seed = seed;
  out.regret.assign(4, {});
  std::vector<std::uint8_t> held(static_cast<std::size_t>(m));
  std::vector<std::uint8_t> abstained(static_cast<std::size_t>(m), 0);
  for (long t = 1; t <= T; ++t) {
    const auto& o = sim.step();
    regret(o);
    convergence(o);
    std::fill(held.begin(), held.end(), 0);
    bool collided = false;
    for (int a = 0; a < n; ++a) {
      const int f = o.matching.firm_of(a);
      if (f == kUnmatched) continue;
      collided = collided || held[static_cast<std::size_t>(f)];
      held[static_cast<std::size_t>(f)] = 1;
    }
    out.collisions += collided;
    bool updating = false;
    if constexpr (requires { sim.policy().updating(); }) updating = sim.policy().updating();
    for (int f = 0; f < m; ++f) {
      const auto k = static_cast<std::size_t>(f);
      const bool rejected = o.gamma[k] == 0;
      out.gamma_zero += rejected;
      out.repeated_abstentions += updating && rejected && abstained[k];
      abstained[k] = updating && rejected;
    }
    long vacant = 0;
    for (int f = 0; f < m; ++f) {
      vacant += o.vacant[static_cast<std::size_t>(f)];
      if (o.vacant[static_cast<std::size_t>(f)] && !o.changed[static_cast<std::size_t>(f)]) {
        ++out.feedback_violations;
      }
    }
    if (vacant < m - n) ++out.feedback_violations;

    const bool logged = t % cfg.stride == 0 || is_checkpoint(t, T);
    if (logged) {
      std::vector<std::string> row{std::to_string(t)};
      for (const RegretSeries* s : {&regret.realized(), &regret.expected()}) {
        for (int a = 0; a < n; ++a) row.push_back(format_number(s->optimal(a, t)));
        for (int a = 0; a < n; ++a) row.push_back(format_number(s->pessimal(a, t)));
      }
      series.row(row);
    }
    if (rounds && logged) {
      for (int a = 0; a < n; ++a) {
        const auto& act = o.actions[static_cast<std::size_t>(a)];
        rounds->row({std::to_string(t), std::to_string(a + 1), join_ids(act.interviews),
                     join_ids(act.applications), join_ids({o.matching.firm_of(a)}),
                     format_number(o.rewards[static_cast<std::size_t>(a)])});
      }
      for (int f = 0; f < m; ++f) {
        const auto k = static_cast<std::size_t>(f);
        firms->row({std::to_string(t), std::to_string(f + 1), std::to_string(o.gamma[k]),
                    std::to_string(o.vacant[k]), std::to_string(o.changed[k])});
      }
    }
  }

  for (long t : summary_checkpoints(T)) {
    std::vector<double> ro, rp, eo, ep;
    for (int a = 0; a < n; ++a) {
      ro.push_back(regret.realized().optimal(a, t));
      rp.push_back(regret.realized().pessimal(a, t));
      eo.push_back(regret.expected().optimal(a, t));
      ep.push_back(regret.expected().pessimal(a, t));
    }
    out.regret[0].push_back(ro);
    out.regret[1].push_back(rp);
    out.regret[2].push_back(eo);
    out.regret[3].push_back(ep);
  }
  out.convergence = convergence.round();
  out.limit = convergence.limit().agent_view();

  if constexpr (requires { sim.policy().phases(); }) {
    const auto& phases = sim.policy().phases();
    out.updating_phases = static_cast<long>(phases.size());
    for (const auto& p : phases) {
      out.phase_starts.push_back(p.t_gs);
      out.imperfect_phases += p.complete && !p.final_updating.perfect();
    }
    if constexpr (std::is_same_v<Policy, Decentralized<DrrAgent>>) {
      files.push_back(dir / rep_name("phases", rep));
      CsvWriter log(files.back(), {"phase", "t_gs", "triggers", "committed"});
      for (const auto& p : phases) {
        std::string kinds;
        if (p.triggers & DrrAgent::kInconsistency) kinds += "inc;";
        if (p.triggers & DrrAgent::kStrategicRejection) kinds += "rej;";
        if (p.triggers & DrrAgent::kVacancy) kinds += "vac;";
        if (!kinds.empty()) kinds.pop_back();
        log.row({std::to_string(p.index + 1), std::to_string(p.t_gs), kinds.empty() ? "-" : kinds,
                 join_ids(p.committed)});
      }
    }
    out.anomalies = sim.policy().anomalies();
  }
  return out;
}

inline ReplicationSummary run_bandit_replication(const ExperimentConfig& cfg, const ArmBank& bank,
                                                 std::uint64_t seed, const std::filesystem::path& dir,
                                                 int rep, std::vector<std::filesystem::path>& files) {
  const long T = cfg.horizon;
  const auto algo = cfg.algorithm == Algorithm::allprobe ? ProbeAlgorithm::allprobe
                    : cfg.algorithm == Algorithm::eap    ? ProbeAlgorithm::eap
                                                         : ProbeAlgorithm::apem;
  const int rank = cfg.algorithm == Algorithm::eap ? cfg.rank : 1;
  const auto trajectory = run_probe_bandit(algo, bank, T, seed, cfg.epsilon, rank);
  const auto regret = hinted_regret(trajectory, bank, rank);

  files.push_back(dir / rep_name("series", rep));
  CsvWriter series(files.back(), {"t", "regret", "pulled"});
  for (long t = 1; t <= T; ++t) {
    if (t % cfg.stride == 0 || is_checkpoint(t, T)) {
      series.row({std::to_string(t), format_number(regret[static_cast<std::size_t>(t - 1)]),
                  std::to_string(trajectory[static_cast<std::size_t>(t - 1)].pulled + 1)});
    }
  }
  ReplicationSummary out;
  out.seed = seed;
  out.regret.assign(1, {});
  for (long t : summary_checkpoints(T)) out.regret[0].push_back({regret[static_cast<std::size_t>(t - 1)]});
  out.most_pulled = most_pulled(trajectory, T - T / 4 + 1, T, static_cast<int>(bank.means.size()));
  return out;
}

// Mean/SE across replications of one metric, per agent and checkpoint.
inline json aggregate_metric(const std::vector<ReplicationSummary>& reps, std::size_t metric,
                             std::size_t agent, std::size_t checkpoints) {
  json mean = json::array();
  json se = json::array();
  for (std::size_t k = 0; k < checkpoints; ++k) {
    std::vector<double> values;
    for (const auto& r : reps) values.push_back(r.regret[metric][k][agent]);
    const auto s = mean_and_se(values);
    mean.push_back(s.mean);
    se.push_back(s.se);
  }
  return {{"mean", mean}, {"se", se}};
}

inline json plateau_json(const json& mean_series, const std::vector<long>& checkpoints, long T) {
  if (T < 10) return nullptr;
  const long early = T / 10;
  double pair[2] = {0.0, 0.0};
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (checkpoints[k] == early) pair[0] = mean_series[k].get<double>();
    if (checkpoints[k] == T) pair[1] = mean_series[k].get<double>();
  }
  const auto r = plateau_ratio(pair, 1, 2);
  return {{"t_early", early},
          {"t_late", T},
          {"early", r.early},
          {"late", r.late},
          {"ratio", r.ratio},
          {"nonpositive_denominator", r.nonpositive_denominator}};
}

}  // namespace detail

/// Runs every replication, writing per-replication CSVs, summary.json and manifest.json.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::optional<std::filesystem::path>& output = std::nullopt) {
  ExperimentResult result;
  result.directory = resolve_output(cfg, output);
  std::filesystem::create_directories(result.directory);
  const auto checkpoints = summary_checkpoints(cfg.horizon);
  std::vector<ReplicationSummary> reps;
  int agents = 1;

  auto guarded = [&](std::uint64_t seed, auto&& body) {
    try {
      return body();
    } catch (const ProtocolError& e) {
      throw ProtocolError(e.round(), "replication seed " + std::to_string(seed) + ": " + e.what());
    }
  };

  if (single_agent(cfg.algorithm)) {
    const auto bank = build_arms(cfg);
    if (cfg.algorithm == Algorithm::eap &&
        (cfg.rank < 1 || cfg.rank > static_cast<int>(bank.means.size()) - 1)) {
      throw InputError("config field 'rank': must lie in 1..arms-1");
    }
    for (int r = 0; r < cfg.replications; ++r) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
      reps.push_back(guarded(seed, [&] {
        return detail::run_bandit_replication(cfg, bank, seed, result.directory, r, result.files);
      }));
    }
  } else {
    const auto market = build_market(cfg);
    agents = market.agents();
    const auto baselines = regret_baselines(market);
    const int n = market.agents();
    const int m = market.firms();
    for (int r = 0; r < cfg.replications; ++r) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
      reps.push_back(guarded(seed, [&] {
        auto run = [&](auto policy) {
          return detail::run_matching_replication(cfg, market, baselines, std::move(policy), seed,
                                                  result.directory, r, result.files);
        };
        switch (cfg.algorithm) {
          case Algorithm::cia: return run(CentralAllocator{});
          case Algorithm::drr: return run(make_drr(n, m));
          case Algorithm::ancdrr: return run(make_ancdrr(n, m));
          default: return run(make_eancdrr(n, m, cfg.lambda.value_or(0.5)));
        }
      }));
    }
  }

  json summary{{"algorithm", std::string(to_string(cfg.algorithm))},
               {"horizon", cfg.horizon},
               {"replications", cfg.replications},
               {"checkpoints", checkpoints}};
  json seeds = json::array();
  for (const auto& r : reps) seeds.push_back(r.seed);
  summary["seeds"] = seeds;

  if (single_agent(cfg.algorithm)) {
    const auto regret = detail::aggregate_metric(reps, 0, 0, checkpoints.size());
    json pulled = json::array();
    for (const auto& r : reps) pulled.push_back(r.most_pulled + 1);
    summary["regret"] = regret;
    summary["plateau"] = detail::plateau_json(regret["mean"], checkpoints, cfg.horizon);
    summary["most_pulled_final_quarter"] = pulled;
  } else {
    json per_agent = json::array();
    for (int a = 0; a < agents; ++a) {
      const auto k = static_cast<std::size_t>(a);
      json entry{{"agent", a + 1}};
      const char* names[] = {"optimal_regret", "pessimal_regret", "expected_optimal_regret",
                             "expected_pessimal_regret"};
      for (std::size_t metric = 0; metric < 4; ++metric) {
        entry[names[metric]] = detail::aggregate_metric(reps, metric, k, checkpoints.size());
      }
      entry["plateau"] = detail::plateau_json(entry["optimal_regret"]["mean"], checkpoints, cfg.horizon);
      entry["expected_plateau"] =
          detail::plateau_json(entry["expected_optimal_regret"]["mean"], checkpoints, cfg.horizon);
      per_agent.push_back(entry);
    }
    summary["agents"] = per_agent;
    json conv = json::array();
    json limits = json::array();
    json phases = json::array();
    json anomalies = json::array();
    json starts = json::array();
    long converged = 0;
    long violations = 0;
    long collisions = 0;
    long gamma_zero = 0;
    long repeated = 0;
    long imperfect = 0;
    for (const auto& r : reps) {
      conv.push_back(r.convergence ? json(*r.convergence) : json(nullptr));
      converged += r.convergence.has_value();
      json lim = json::array();
      for (int f : r.limit) lim.push_back(f < 0 ? json(nullptr) : json(f + 1));
      limits.push_back(lim);
      phases.push_back(r.updating_phases);
      anomalies.push_back(r.anomalies);
      violations += r.feedback_violations;
      collisions += r.collisions;
      gamma_zero += r.gamma_zero;
      repeated += r.repeated_abstentions;
      imperfect += r.imperfect_phases;
      starts.push_back(r.phase_starts);
    }
    summary["convergence_rounds"] = conv;
    summary["converged_fraction"] = static_cast<double>(converged) / static_cast<double>(reps.size());
    summary["limit_matchings"] = limits;
    summary["updating_phases"] = phases;
    summary["fallback_anomalies"] = anomalies;
    summary["feedback_invariant_violations"] = violations;
    summary["collisions"] = collisions;
    summary["strategic_rejections"] = gamma_zero;
    if (cfg.algorithm == Algorithm::drr) {
      summary["phase_starts"] = starts;
      summary["imperfect_updating_phases"] = imperfect;
      summary["repeated_updating_abstentions"] = repeated;
    }
  }

  result.summary = summary;
  const auto summary_path = result.directory / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");
  result.files.push_back(summary_path);

  json file_list = json::array();
  for (const auto& f : result.files) file_list.push_back(f.filename().string());
  result.manifest = {{"tool", "hintmatch"},
                     {"version", kToolVersion},
                     {"config_hash", config_hash(cfg)},
                     {"config", config_to_json(cfg)},
                     {"files", file_list}};
  const auto manifest_path = result.directory / "manifest.json";
  write_text(manifest_path, result.manifest.dump(2) + "\n");
  result.files.push_back(manifest_path);
  return result;
}

}  // namespace hintmatch
