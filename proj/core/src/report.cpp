#include "semnav/report.hpp"

#include <algorithm>
#include <map>

#include "semnav/error.hpp"

namespace semnav {

namespace {

std::vector<std::string> aggregate_cells(const Aggregate& a) { return {fmt(a.mean), fmt(a.ci95)}; }

std::vector<std::string> summary_row(const std::string& subset, const std::string& method, int episodes,
                                     const NavSummary& s) {
  std::vector<std::string> row{subset, method, std::to_string(episodes)};
  for (const Aggregate* a : {&s.spl, &s.soft_spl, &s.success, &s.dts_cells, &s.dts_meters}) {
    const auto cells = aggregate_cells(*a);
    row.insert(row.end(), cells.begin(), cells.end());
  }
  return row;
}

// Column index by header name; throws FormatError when missing.
std::size_t column(const std::vector<std::string>& header, const std::string& name, const std::filesystem::path& file) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw FormatError(file.string() + " lacks column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

CsvTable map_table(const std::vector<std::pair<std::string, MapMetrics>>& methods,
                   const std::vector<std::string>& class_names) {
  CsvTable t({"method", "class", "accuracy", "iou", "f1"});
  for (const auto& [name, m] : methods) {
    for (const ClassScores& s : m.per_class) {
      if (!s.present) continue;
      const std::size_t k = static_cast<std::size_t>(s.class_index);
      t.add({name, k < class_names.size() ? class_names[k] : std::to_string(k), fmt(s.accuracy), fmt(s.iou), fmt(s.f1)});
    }
    t.add({name, "mean", fmt(m.mean_accuracy), fmt(m.mean_iou), fmt(m.mean_f1)});
    t.add({name, "overall", fmt(m.overall_accuracy), "", ""});
  }
  return t;
}

CsvTable map_evaluation_table(const MapEvaluation& ev, const ClassCatalog& catalog, bool with_ensemble) {
  std::vector<std::pair<std::string, MapMetrics>> sem{{"semantic/single_view", ev.semantic_single_view},
                                                      {"semantic/multi_view", ev.semantic_multi_view}};
  std::vector<std::pair<std::string, MapMetrics>> occ{{"occupancy/single_view", ev.occupancy_single_view},
                                                      {"occupancy/multi_view", ev.occupancy_multi_view}};
  if (with_ensemble) {
    sem.emplace_back("semantic/ensemble", ev.semantic_ensemble);
    occ.emplace_back("occupancy/ensemble", ev.occupancy_ensemble);
  }
  CsvTable t = map_table(sem, catalog.semantic_classes);
  const CsvTable o = map_table(occ, catalog.occupancy_classes);
  for (const auto& row : o.rows()) t.add(row);
  return t;
}

CsvTable nav_summary_table(const std::vector<MethodEvaluation>& evaluations, const std::vector<Episode>& episodes,
                           double cell_size) {
  CsvTable t({"subset", "method", "episodes", "spl", "spl_ci", "soft_spl", "soft_spl_ci", "success", "success_ci",
              "dts", "dts_ci", "dts_m", "dts_m_ci"});
  for (const char* subset : {"all", "easy", "hard"}) {
    for (const MethodEvaluation& ev : evaluations) {
      std::vector<EpisodeResult> results;
      for (std::size_t i = 0; i < ev.outcomes.size(); ++i) {
        const std::string d(difficulty_name(episodes[i].difficulty));
        if (std::string(subset) == "all" || d == subset) results.push_back(ev.outcomes[i].result);
      }
      t.add(summary_row(subset, ev.method.name, static_cast<int>(results.size()), summarize(results, cell_size)));
    }
  }
  return t;
}

CsvTable episode_table(const MethodEvaluation& evaluation, const std::vector<Episode>& episodes) {
  CsvTable t({"episode", "world_seed", "difficulty", "target_class", "success", "stop_called", "steps", "path_length",
              "shortest_geodesic", "initial_distance", "final_distance", "spl", "soft_spl", "failure"});
  for (std::size_t i = 0; i < evaluation.outcomes.size(); ++i) {
    const EpisodeResult& r = evaluation.outcomes[i].result;
    const Episode& e = episodes[i];
    t.add({std::to_string(i), std::to_string(e.world_seed), std::string(difficulty_name(e.difficulty)),
           std::to_string(e.target_class), r.success ? "1" : "0", r.stop_called ? "1" : "0", std::to_string(r.steps),
           std::to_string(r.path_length), std::to_string(r.shortest_geodesic), std::to_string(r.initial_distance),
           std::to_string(r.final_distance), fmt(r.shortest_geodesic > 0 ? spl_term(r) : 0.0),
           fmt(r.initial_distance > 0 ? soft_spl_term(r) : 0.0), evaluation.outcomes[i].failure});
  }
  return t;
}

CsvTable trajectory_table(const EpisodeOutcome& outcome) {
  CsvTable t({"step", "row", "col", "heading", "action", "goal_row", "goal_col"});
  for (const TrajectoryRow& r : outcome.trajectory)
    t.add({std::to_string(r.step), std::to_string(r.pose.cell.row), std::to_string(r.pose.cell.col),
           std::string(heading_name(r.pose.heading)), std::string(action_name(r.action)),
           r.goal ? std::to_string(r.goal->row) : "", r.goal ? std::to_string(r.goal->col) : ""});
  return t;
}

CsvTable decision_table(const EpisodeOutcome& outcome) {
  CsvTable t({"step", "goal_row", "goal_col", "score", "reason"});
  for (const GoalDecision& d : outcome.decisions)
    t.add({std::to_string(d.step), std::to_string(d.goal.row), std::to_string(d.goal.col), fmt(d.score), d.reason});
  return t;
}

std::vector<std::filesystem::path> build_report(const std::filesystem::path& run_dir) {
  namespace fs = std::filesystem;
  const fs::path results = run_dir / "results";
  if (!fs::is_directory(results)) throw Error("no results directory in " + run_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(results))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  // Map quality: mean rows of every map evaluation, keyed by model.
  CsvTable table1({"model", "method", "accuracy", "iou", "f1"});
  std::map<std::string, double> ensemble_iou;
  CsvTable table3({"model", "method", "episodes", "spl", "spl_ci", "soft_spl", "soft_spl_ci", "success", "success_ci",
                   "dts_m", "dts_m_ci"});
  CsvTable table4 = table3;
  for (const fs::path& f : files) {
    const std::string stem = f.stem().string();
    const auto rows = read_csv(f);
    if (rows.empty()) continue;
    const auto& h = rows.front();
    if (stem.rfind("map_", 0) == 0) {
      const std::string model = stem.substr(4);
      const auto mc = column(h, "method", f), cc = column(h, "class", f), ac = column(h, "accuracy", f),
                 ic = column(h, "iou", f), f1 = column(h, "f1", f);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][cc] != "mean") continue;
        table1.add({model, rows[i][mc], rows[i][ac], rows[i][ic], rows[i][f1]});
        if (rows[i][mc] == "semantic/ensemble") ensemble_iou[model] = std::stod(rows[i][ic]);
      }
    } else if (stem.rfind("nav_", 0) == 0 && stem.size() > 12 && stem.substr(stem.size() - 8) == "_summary") {
      const std::string model = stem.substr(4, stem.size() - 12);
      const auto sc = column(h, "subset", f), mc = column(h, "method", f);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::vector<std::string> out{model, r[mc]};
        for (const char* name : {"episodes", "spl", "spl_ci", "soft_spl", "soft_spl_ci", "success", "success_ci",
                                 "dts_m", "dts_m_ci"})
          out.push_back(r[column(h, name, f)]);
        const bool ablation = r[mc].find('+') != std::string::npos;
        if (r[sc] == "all" && !ablation) table3.add(out);
        const std::string base = r[mc].substr(0, r[mc].find('+'));
        if (r[sc] == "hard" && base == "upper") table4.add(out);
      }
    }
  }

  CsvTable table2({"model", "semantic_iou", "gain_over_offline"});
  const auto offline = ensemble_iou.find("offline");
  for (const auto& [model, iou] : ensemble_iou)
    table2.add({model, fmt(iou), offline == ensemble_iou.end() ? "" : fmt(iou - offline->second)});

  const fs::path out = run_dir / "reports";
  std::vector<fs::path> written;
  const std::pair<const char*, const CsvTable*> tables[] = {
      {"table1.csv", &table1}, {"table2.csv", &table2}, {"table3.csv", &table3}, {"table4.csv", &table4}};
  for (const auto& [name, table] : tables) {
    table->save(out / name);
    written.push_back(out / name);
  }
  return written;
}

}  // namespace semnav
