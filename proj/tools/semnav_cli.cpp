#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semnav/error.hpp"
#include "semnav/report.hpp"
#include "semnav/run.hpp"

namespace fs = std::filesystem;
using namespace semnav;

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::string model = "offline";
  std::string objective;
  std::vector<std::string> methods;
  int episode = 0;
  bool trajectories = false;
};

RunContext open(const Options& o) {
  std::string base = o.config;
  if (base.empty() && !o.out.empty() && fs::exists(fs::path(o.out) / "config.json"))
    base = (fs::path(o.out) / "config.json").string();
  RunConfig config = load_run_config(base, o.overrides);
  const fs::path dir = o.out.empty() ? fs::path(config.output_dir) : fs::path(o.out);
  return open_run(std::move(config), dir);
}

ActiveObjective objective_of(const Options& o, const RunContext& run) {
  return o.objective.empty() ? run.config.objective : parse_objective(o.objective);
}

void gen_worlds(const Options& o) {
  const GenerationSummary s = run_gen_worlds(open(o));
  std::cout << "wrote " << s.train_worlds << " train worlds, " << s.eval_worlds << " eval worlds and " << s.episodes
            << " episodes\n";
}

void collect_offline(const Options& o) {
  std::cout << "collected " << run_collect_offline(open(o)) << " offline samples\n";
}

void train(const Options& o) {
  const RunContext run = open(o);
  const std::size_t n = run_train(run);
  std::cout << "trained " << run.config.ensemble_size << " members on " << n << " samples\n";
}

void collect_active(const Options& o) {
  const RunContext run = open(o);
  const ActiveObjective obj = objective_of(o, run);
  const ActiveCollectionStats s = run_collect_active(run, obj, o.model);
  std::cout << "collected " << run.config.active_budget << " samples with the " << objective_name(obj)
            << " objective over " << s.worlds_visited << " world visits (" << s.deadlocks << " deadlocks)\n";
}

void finetune(const Options& o) {
  const RunContext run = open(o);
  const ActiveObjective obj = objective_of(o, run);
  const std::size_t n = run_finetune(run, obj, o.model);
  std::cout << "fine-tuned " << o.model << " on " << n << " samples into " << model_name(obj) << "\n";
}

void eval_map(const Options& o) {
  const MapEvaluation ev = run_eval_map(open(o), o.model);
  std::printf("%d crops, semantic mean IoU: single view %.4f, multi view %.4f", ev.crops,
              ev.semantic_single_view.mean_iou, ev.semantic_multi_view.mean_iou);
  if (o.model != "none") std::printf(", ensemble %.4f", ev.semantic_ensemble.mean_iou);
  std::printf("\n");
}

void eval_nav(const Options& o) {
  for (const MethodEvaluation& ev : run_eval_nav(open(o), o.model, o.methods, o.trajectories)) {
    const NavSummary& s = ev.summary;
    std::printf("%-28s success %.3f  spl %.3f  soft_spl %.3f  dts %.2f m\n", ev.method.name.c_str(), s.success.mean,
                s.spl.mean, s.soft_spl.mean, s.dts_meters.mean);
  }
}

void render(const Options& o) {
  const RunContext run = open(o);
  const std::string method = o.methods.empty() ? std::string(strategy_name(run.config.strategy.kind)) : o.methods.front();
  if (const auto out = run_render(run, o.model, method, o.episode))
    std::cout << "episode " << o.episode << ": " << (out->result.success ? "success" : "failure") << " after "
              << out->result.steps << " steps\n";
}

void report(const Options& o) {
  for (const fs::path& p : build_report(open(o).dir)) std::cout << "wrote " << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semnav: semantic map prediction and uncertainty-driven object navigation on grid worlds"};
  app.require_subcommand(1);
  Options o;
  struct Verb {
    const char* name;
    const char* help;
    void (*fn)(const Options&);
  };
  const Verb verbs[] = {
      {"gen-worlds", "Generate train and eval worlds plus evaluation episodes", gen_worlds},
      {"collect-offline", "Collect the offline dataset along shortest paths", collect_offline},
      {"train", "Train the ensemble on the offline dataset", train},
      {"collect-active", "Collect samples by navigating towards uncertain cells", collect_active},
      {"finetune", "Fine-tune a model on actively collected samples", finetune},
      {"eval-map", "Score map predictions against projection baselines", eval_map},
      {"eval-nav", "Run navigation episodes for each method", eval_nav},
      {"render", "Render worlds and one episode as PNG", render},
      {"report", "Assemble result tables from a run directory", report},
  };
  void (*chosen)(const Options&) = nullptr;
  for (const Verb& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("-c,--config", o.config, "JSON run config; defaults to the run directory's config.json, then built-in defaults");
    sub->add_option("-s,--set", o.overrides, "Override one config key, e.g. --set train.epochs=2");
    sub->add_option("-o,--out", o.out, "Run directory; defaults to output_dir of the config");
    const std::string name = v.name;
    const bool uses_model =
        name == "collect-active" || name == "finetune" || name == "eval-map" || name == "eval-nav" || name == "render";
    if (uses_model) sub->add_option("-m,--model", o.model, "Model under models/; eval-map and render accept none");
    if (name == "collect-active" || name == "finetune")
      sub->add_option("--objective", o.objective, "variance, entropy or bald");
    if (name == "eval-nav") {
      sub->add_option("--methods", o.methods, "Methods to evaluate, e.g. upper fbe upper+gt_path");
      sub->add_flag("--trajectories", o.trajectories, "Write per-episode trajectory and goal CSVs");
    }
    if (name == "render") {
      sub->add_option("--method", o.methods, "Method for the rendered episode")->expected(1);
      sub->add_option("--episode", o.episode, "Episode index to render");
    }
    sub->callback([&chosen, fn = v.fn] { chosen = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    chosen(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
