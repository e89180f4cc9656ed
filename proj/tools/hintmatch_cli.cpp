#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hintmatch/hintmatch.hpp"

namespace hm = hintmatch;

namespace {

void print_tables(const hm::Market& market) {
  const auto truth = hm::ground_truth_prefs(market);
  for (int a = 0; a < market.agents(); ++a) {
    std::cout << "  a" << a + 1 << ":";
    for (int f : truth.agents[static_cast<std::size_t>(a)]) std::cout << " f" << f + 1;
    std::cout << '\n';
  }
  for (int f = 0; f < market.firms(); ++f) {
    std::cout << "  f" << f + 1 << ":";
    for (int a : truth.firms[static_cast<std::size_t>(f)]) std::cout << " a" << a + 1;
    std::cout << '\n';
  }
}

std::string show(const hm::Matching& mu) {
  std::string s;
  for (int a = 0; a < mu.agents(); ++a) {
    if (a) s += ' ';
    s += "(a" + std::to_string(a + 1) + ",";
    s += mu.firm_of(a) == hm::kUnmatched ? std::string("-") : "f" + std::to_string(mu.firm_of(a) + 1);
    s += ')';
  }
  return s;
}

int print_stable(const hm::Market& market) {
  const auto extremes = hm::stable_extremes(market);
  std::cout << "agent-optimal: " << show(extremes.agent_optimal) << '\n';
  std::cout << "agent-pessimal: " << show(extremes.agent_pessimal) << '\n';
  if (market.agents() <= hm::kEnumerationMaxAgents && market.firms() <= hm::kEnumerationMaxFirms) {
    const auto set = hm::enumerate_stable_matchings(market);
    std::cout << set.matchings.size() << " stable matching(s)\n";
    for (const auto& mu : set.matchings) std::cout << "  " << show(mu) << '\n';
  } else {
    std::cout << "market too large to enumerate every stable matching\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit learning of stable matchings with interviews"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hm::kToolVersion));

  std::string config_path;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "Output directory (overrides the config and $HINTMATCH_OUT)");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  bool show_tables = false;
  auto* examples = app.add_subcommand("examples", "List the built-in example markets");
  examples->add_flag("-t,--tables", show_tables, "Also print each example's preference lists");

  std::string market_path;
  std::string example_name;
  auto* stable = app.add_subcommand("stable", "Print the stable matchings of a market");
  auto* file_opt = stable->add_option("market", market_path, "Market JSON file")->check(CLI::ExistingFile);
  auto* example_opt = stable->add_option("-e,--example", example_name, "Built-in example instead of a file");
  file_opt->excludes(example_opt);

  hm::MarketParams params;
  bool alpha = false;
  std::uint64_t seed = 1;
  std::string write_path;
  auto* generate = app.add_subcommand("generate", "Write a random market to a JSON file");
  generate->add_option("-n,--agents", params.n, "Number of agents")->default_val(3);
  generate->add_option("-m,--firms", params.m, "Number of firms")->default_val(3);
  generate->add_option("-g,--min-gap", params.min_gap, "Minimum gap between a row's means")->default_val(0.1);
  generate->add_flag("--alpha", alpha, "Generate an alpha-reducible market");
  generate->add_option("-s,--seed", seed, "Generator seed")->default_val(1);
  generate->add_option("output", write_path, "Destination file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = hm::load_config(config_path);
      std::optional<std::filesystem::path> dir;
      if (out_dir) dir = *out_dir;
      const auto result = hm::run_experiment(cfg, dir);
      std::cout << "wrote " << result.files.size() << " files to " << result.directory.string() << '\n';
    } else if (*validate) {
      const auto cfg = hm::load_config(config_path);
      if (!hm::single_agent(cfg.algorithm)) {
        (void)hm::build_market(cfg);
      } else {
        (void)hm::build_arms(cfg);
      }
      std::cout << "ok " << hm::to_string(cfg.algorithm) << " T=" << cfg.horizon
                << " R=" << cfg.replications << " hash=" << hm::config_hash(cfg) << '\n';
    } else if (*examples) {
      for (auto name : hm::kExampleNames) {
        std::cout << name << '\n';
        if (show_tables) print_tables(hm::named_example(name));
      }
    } else if (*stable) {
      if (example_name.empty() && market_path.empty()) {
        std::cerr << "stable: give a market file or --example\n";
        return 2;
      }
      const auto market =
          example_name.empty() ? hm::load_market(market_path) : hm::named_example(example_name);
      return print_stable(market);
    } else if (*generate) {
      hm::Rng rng(seed);
      const auto market = alpha ? hm::generate_alpha_reducible(params, rng) : hm::generate_market(params, rng);
      hm::save_market(market, write_path);
      std::cout << "wrote " << write_path << '\n';
    }
  } catch (const hm::ProtocolError& e) {
    std::cerr << "protocol error at round " << e.round() << ": " << e.what() << '\n';
    return 3;
  } catch (const hm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
