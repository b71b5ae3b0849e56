#include "semnav/config.hpp"

#include <algorithm>
#include <set>

#include "semnav/error.hpp"
#include "semnav/serialization.hpp"

namespace semnav {

namespace {

// Reads members of one JSON object and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + child(key) + "' has the wrong type: " + e.what());
    }
  }

  template <typename F>
  void nested(const char* key, F&& read) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    Reader sub(j_.at(key), child(key));
    read(sub);
    sub.finish();
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const nlohmann::json& at(const char* key) const { return j_.at(key); }
  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.contains(key)) throw ConfigError("unknown config key '" + child(key.c_str()) + "'");
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "config key '" + path_ + "'"; }
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_train(Reader& r, TrainConfig& t) {
  r.get("learning_rate", t.learning_rate);
  r.get("batch_size", t.batch_size);
  r.get("epochs", t.epochs);
  r.get("max_steps", t.max_steps);
  r.get("semantic_weight", t.semantic_weight);
  r.get("beta1", t.beta1);
  r.get("beta2", t.beta2);
  r.get("epsilon", t.epsilon);
  r.get("shuffle_seed", t.shuffle_seed);
  r.get("log_every", t.log_every);
}

nlohmann::ordered_json train_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate}, {"batch_size", t.batch_size}, {"epochs", t.epochs},
          {"max_steps", t.max_steps},         {"semantic_weight", t.semantic_weight}, {"beta1", t.beta1},
          {"beta2", t.beta2},                 {"epsilon", t.epsilon}, {"shuffle_seed", t.shuffle_seed},
          {"log_every", t.log_every}};
}

template <typename Parse>
auto parse_enum(Reader& r, const char* key, Parse parse) -> std::optional<decltype(parse(""))> {
  std::string name;
  if (!r.has(key)) return std::nullopt;
  if (!r.at(key).is_string()) throw ConfigError("config key '" + r.child(key) + "' must be a string");
  name = r.at(key).get<std::string>();
  return parse(name);
}

}  // namespace

RunConfig::RunConfig() {
  for (std::uint64_t s = 1; s <= 20; ++s) train_seeds.push_back(s);
  for (std::uint64_t s = 1001; s <= 1005; ++s) eval_seeds.push_back(s);
  nav_methods = {"random_walk", "fbe", "mean", "upper", "lower", "mixed",
                 "upper+gt_path", "upper+oracle_stop", "upper+gt_path+oracle_stop"};
  finetune.epochs = 1;
}

void RunConfig::validate() const {
  if (world.width < 24 || world.height < 24) throw ConfigError("world must be at least 24x24");
  if (world.min_rooms < 1 || world.max_rooms < world.min_rooms) throw ConfigError("invalid room count range");
  if (world.cell_size <= 0.0) throw ConfigError("cell_size must be positive");
  observation.validate();
  arch.validate();
  if (ensemble_size < 2) throw ConfigError("ensemble_size must be at least 2");
  train.validate();
  finetune.validate();
  strategy.validate();
  nav.validate();
  planner.validate();
  if (train_seeds.empty()) throw ConfigError("train_seeds must not be empty");
  if (eval_seeds.empty()) throw ConfigError("eval_seeds must not be empty");
  for (std::uint64_t s : eval_seeds)
    if (std::find(train_seeds.begin(), train_seeds.end(), s) != train_seeds.end())
      throw ConfigError("eval seed " + std::to_string(s) + " is also a train seed");
  if (offline_budget < 0 || active_budget < 0) throw ConfigError("sample budgets must be non-negative");
  if (collection_replan_interval < 1) throw ConfigError("collection_replan_interval must be at least 1");
  if (collection_steps_per_world < 1) throw ConfigError("collection_steps_per_world must be positive");
  if (eval_episodes < 0) throw ConfigError("eval_episodes must be non-negative");
  if (!(hard_fraction >= 0.0 && hard_fraction <= 1.0)) throw ConfigError("hard_fraction must lie in [0, 1]");
  if (map_sequences < 0 || sequence_length < 1) throw ConfigError("invalid map evaluation sequence settings");
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["output_dir"] = c.output_dir;
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const PriorRule& r : c.world.prior_rules)
    rules.push_back({{"object", r.object}, {"anchor", r.anchor}, {"probability", r.probability}});
  j["world"] = {{"width", c.world.width},
                {"height", c.world.height},
                {"min_rooms", c.world.min_rooms},
                {"max_rooms", c.world.max_rooms},
                {"min_room_interior", c.world.min_room_interior},
                {"cell_size", c.world.cell_size},
                {"prior_rules", rules}};
  j["observation"] = {{"range", c.observation.range},
                      {"fov_degrees", c.observation.fov_degrees},
                      {"label_noise", c.observation.label_noise},
                      {"depth_dropout", c.observation.depth_dropout}};
  j["arch"] = {{"crop_size", c.arch.crop_size},
               {"semantic_classes", c.arch.semantic_classes},
               {"width1", c.arch.width1},
               {"width2", c.arch.width2},
               {"width3", c.arch.width3}};
  j["ensemble_size"] = c.ensemble_size;
  j["model_seed"] = c.model_seed;
  j["train"] = train_json(c.train);
  j["finetune"] = train_json(c.finetune);
  j["strategy"] = {{"kind", strategy_name(c.strategy.kind)}, {"alpha1", c.strategy.alpha1}, {"alpha2", c.strategy.alpha2}};
  j["nav"] = {{"stop_probability", c.nav.stop_probability},
              {"stop_distance", c.nav.stop_distance},
              {"replan_interval", c.nav.replan_interval},
              {"max_steps", c.nav.max_steps},
              {"success_radius", c.nav.success_radius},
              {"stop_distance_on_true_map", c.nav.stop_distance_on_true_map}};
  j["planner"] = {{"obstacle_threshold", c.planner.obstacle_threshold}, {"unknown_cost", c.planner.unknown_cost}};
  j["episodes"] = {{"easy_ratio", c.episodes.easy_ratio},
                   {"hard_ratio", c.episodes.hard_ratio},
                   {"hard_min_geodesic", c.episodes.hard_min_geodesic},
                   {"min_geodesic", c.episodes.min_geodesic},
                   {"max_retries", c.episodes.max_retries},
                   {"target_classes", c.episodes.target_classes}};
  j["train_seeds"] = c.train_seeds;
  j["eval_seeds"] = c.eval_seeds;
  j["offline_budget"] = c.offline_budget;
  j["active_budget"] = c.active_budget;
  j["collection_seed"] = c.collection_seed;
  j["objective"] = objective_name(c.objective);
  j["collection_replan_interval"] = c.collection_replan_interval;
  j["collection_steps_per_world"] = c.collection_steps_per_world;
  j["eval_episodes"] = c.eval_episodes;
  j["hard_fraction"] = c.hard_fraction;
  j["episode_seed"] = c.episode_seed;
  j["nav_methods"] = c.nav_methods;
  j["map_sequences"] = c.map_sequences;
  j["sequence_length"] = c.sequence_length;
  j["map_seed"] = c.map_seed;
  j["workers"] = c.workers;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  Reader r(j, "");
  r.get("output_dir", c.output_dir);
  r.nested("world", [&](Reader& w) {
    w.get("width", c.world.width);
    w.get("height", c.world.height);
    w.get("min_rooms", c.world.min_rooms);
    w.get("max_rooms", c.world.max_rooms);
    w.get("min_room_interior", c.world.min_room_interior);
    w.get("cell_size", c.world.cell_size);
    if (w.has("prior_rules")) {
      const auto& arr = w.at("prior_rules");
      if (!arr.is_array()) throw ConfigError("config key 'world.prior_rules' must be an array");
      c.world.prior_rules.clear();
      for (const auto& item : arr) {
        PriorRule rule;
        Reader rr(item, "world.prior_rules[]");
        rr.get("object", rule.object);
        rr.get("anchor", rule.anchor);
        rr.get("probability", rule.probability);
        rr.finish();
        c.world.prior_rules.push_back(rule);
      }
    }
  });
  r.nested("observation", [&](Reader& o) {
    o.get("range", c.observation.range);
    o.get("fov_degrees", c.observation.fov_degrees);
    o.get("label_noise", c.observation.label_noise);
    o.get("depth_dropout", c.observation.depth_dropout);
  });
  r.nested("arch", [&](Reader& a) {
    a.get("crop_size", c.arch.crop_size);
    a.get("semantic_classes", c.arch.semantic_classes);
    a.get("width1", c.arch.width1);
    a.get("width2", c.arch.width2);
    a.get("width3", c.arch.width3);
  });
  r.get("ensemble_size", c.ensemble_size);
  r.get("model_seed", c.model_seed);
  r.nested("train", [&](Reader& t) { read_train(t, c.train); });
  r.nested("finetune", [&](Reader& t) { read_train(t, c.finetune); });
  r.nested("strategy", [&](Reader& s) {
    if (auto k = parse_enum(s, "kind", parse_strategy)) c.strategy.kind = *k;
    s.get("alpha1", c.strategy.alpha1);
    s.get("alpha2", c.strategy.alpha2);
  });
  r.nested("nav", [&](Reader& n) {
    n.get("stop_probability", c.nav.stop_probability);
    n.get("stop_distance", c.nav.stop_distance);
    n.get("replan_interval", c.nav.replan_interval);
    n.get("max_steps", c.nav.max_steps);
    n.get("success_radius", c.nav.success_radius);
    n.get("stop_distance_on_true_map", c.nav.stop_distance_on_true_map);
  });
  r.nested("planner", [&](Reader& p) {
    p.get("obstacle_threshold", c.planner.obstacle_threshold);
    p.get("unknown_cost", c.planner.unknown_cost);
  });
  r.nested("episodes", [&](Reader& e) {
    e.get("easy_ratio", c.episodes.easy_ratio);
    e.get("hard_ratio", c.episodes.hard_ratio);
    e.get("hard_min_geodesic", c.episodes.hard_min_geodesic);
    e.get("min_geodesic", c.episodes.min_geodesic);
    e.get("max_retries", c.episodes.max_retries);
    e.get("target_classes", c.episodes.target_classes);
  });
  r.get("train_seeds", c.train_seeds);
  r.get("eval_seeds", c.eval_seeds);
  r.get("offline_budget", c.offline_budget);
  r.get("active_budget", c.active_budget);
  r.get("collection_seed", c.collection_seed);
  if (auto o = parse_enum(r, "objective", parse_objective)) c.objective = *o;
  r.get("collection_replan_interval", c.collection_replan_interval);
  r.get("collection_steps_per_world", c.collection_steps_per_world);
  r.get("eval_episodes", c.eval_episodes);
  r.get("hard_fraction", c.hard_fraction);
  r.get("episode_seed", c.episode_seed);
  r.get("nav_methods", c.nav_methods);
  r.get("map_sequences", c.map_sequences);
  r.get("sequence_length", c.sequence_length);
  r.get("map_seed", c.map_seed);
  r.get("workers", c.workers);
  r.finish();
  return c;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;
  }
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("empty key in override: " + assignment);
    if (!node->is_object()) throw ConfigError("override path crosses a non-object: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = nlohmann::json::object();
    start = dot + 1;
  }
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  nlohmann::json doc = nlohmann::json::object();
  if (!path.empty()) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    try {
      doc = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  RunConfig c = run_config_from_json(doc);
  c.validate();
  return c;
}

}  // namespace semnav
