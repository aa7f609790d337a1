// Command-line front end: full pipeline, individual stages, synthetic data
// generation, and the clustering benchmark.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "webreorg/errors.hpp"
#include "webreorg/loggen.hpp"
#include "webreorg/pipeline.hpp"
#include "webreorg/sitegraph.hpp"

namespace {

using namespace webreorg;

struct CommonArgs {
  std::string config_path;
  std::string log_path;
  std::string graph_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

PipelineConfig make_config(const CommonArgs& args) {
  PipelineConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  if (args.seed) cfg.rng_seed = *args.seed;
  validate_config(cfg);
  return cfg;
}

std::optional<std::string> graph_or_none(const CommonArgs& args) {
  if (args.graph_path.empty()) return std::nullopt;
  return args.graph_path;
}

void print_ingest(const IngestStats& s) {
  std::cout << "log_lines_total=" << s.total_lines << "\n"
            << "log_lines_parsed=" << s.parsed << "\n"
            << "log_lines_skipped=" << s.skipped << "\n";
}

void print_preprocess(const PreprocessStats& s) {
  std::cout << "records_clean=" << s.records_clean << "\n"
            << "users=" << s.users << "\n"
            << "sessions=" << s.sessions << "\n"
            << "sessions_incomplete=" << s.sessions_incomplete << "\n"
            << "pages_total=" << s.pages_total << "\n"
            << "pages_after_thresholds=" << s.pages_after_thresholds << "\n"
            << "transactions=" << s.transactions << "\n";
}

void print_cluster(const ClusterStats& s) {
  std::cout << "pages_clustered=" << s.pages_clustered << "\n"
            << "pages_dropped_extreme=" << s.dropped_extreme << "\n"
            << "clusters=" << s.clusters << "\n"
            << "cluster_distance_evals=" << s.distance_evals << "\n";
}

void print_mine(const MineStats& s) {
  std::cout << "transactions=" << s.transactions << "\n"
            << "itemsets=" << s.itemsets << "\n"
            << "rules=" << s.rules << "\n"
            << "candidates=" << s.candidates << "\n"
            << "min_support_count=" << s.min_count << "\n";
}

void print_plan(const PlanStats& s) {
  std::cout << "links_matched=" << s.matched << "\n"
            << "links_accepted=" << s.accepted << "\n"
            << "links_rejected=" << s.rejected << "\n";
  if (s.mean_efficiency_pct) {
    std::cout << "mean_improved_efficiency_pct=" << *s.mean_efficiency_pct
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"web-usage-mining link reorganization toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  int bench_n = 6000;
  int bench_k = 5;
  int bench_t_min = 3;
  int bench_repeats = 3;
  int gen_users = 50;
  int gen_steps = 40;

  auto add_common = [&](CLI::App* cmd, bool with_log, bool with_graph) {
    cmd->add_option("--config", args.config_path, "key=value config file");
    if (with_log) cmd->add_option("--log", args.log_path, "access log file");
    if (with_graph) {
      cmd->add_option("--graph", args.graph_path, "site graph file");
    }
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--seed", args.seed, "override rng_seed");
  };

  auto* run = app.add_subcommand("run", "full pipeline: log to plan");
  add_common(run, true, true);
  run->get_option("--log")->required();

  auto* ingest = app.add_subcommand("ingest", "parse the access log");
  add_common(ingest, true, false);
  ingest->get_option("--log")->required();

  auto* preprocess =
      app.add_subcommand("preprocess", "sessionize and build page stats");
  add_common(preprocess, false, true);

  auto* cluster = app.add_subcommand("cluster", "cluster pages by (S, C)");
  add_common(cluster, false, false);

  auto* mine = app.add_subcommand("mine", "mine itemsets, rules, candidates");
  add_common(mine, false, false);

  auto* plan = app.add_subcommand("plan", "build the reorganization plan");
  add_common(plan, false, false);

  auto* bench =
      app.add_subcommand("bench", "farthest-first vs k-means comparison");
  bench->add_option("--n", bench_n, "point count");
  bench->add_option("--k", bench_k, "cluster count");
  bench->add_option("--t-min", bench_t_min, "minimum k-means iterations");
  bench->add_option("--repeats", bench_repeats, "timing repeats");
  bench->add_option("--seed", args.seed, "rng seed");

  auto* gen = app.add_subcommand("gen", "generate a synthetic site and log");
  gen->add_option("--log", args.log_path, "output log file")->required();
  gen->add_option("--graph", args.graph_path,
                  "also write the site graph here");
  gen->add_option("--users", gen_users, "simulated users");
  gen->add_option("--steps", gen_steps, "steps per user");
  gen->add_option("--seed", args.seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) {
      auto cfg = make_config(args);
      auto summary =
          run_pipeline(cfg, args.log_path, graph_or_none(args), args.out_dir);
      std::cout << format_summary(summary);
    } else if (ingest->parsed()) {
      print_ingest(stage_ingest(args.log_path, args.out_dir));
    } else if (preprocess->parsed()) {
      auto cfg = make_config(args);
      print_preprocess(stage_preprocess(cfg, args.out_dir, graph_or_none(args)));
    } else if (cluster->parsed()) {
      auto cfg = make_config(args);
      print_cluster(stage_cluster(cfg, args.out_dir));
    } else if (mine->parsed()) {
      auto cfg = make_config(args);
      print_mine(stage_mine(cfg, args.out_dir));
    } else if (plan->parsed()) {
      auto cfg = make_config(args);
      print_plan(stage_plan(cfg, args.out_dir));
    } else if (bench->parsed()) {
      auto result = bench_compare(bench_n, bench_k, bench_t_min,
                                  args.seed.value_or(42), bench_repeats);
      std::cout << format_bench(result);
    } else if (gen->parsed()) {
      SiteGraph site = demo_site();
      if (!args.graph_path.empty()) save_graph(site, args.graph_path);
      auto lines = generate_synthetic_logs(site, gen_users, gen_steps,
                                           args.seed.value_or(42));
      std::ofstream out(args.log_path);
      if (!out) throw InputError("cannot write log file: " + args.log_path);
      for (const auto& line : lines) out << line << "\n";
      std::cout << "lines=" << lines.size() << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
