#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "semnav/catalog.hpp"
#include "semnav/episodes.hpp"
#include "semnav/metrics.hpp"
#include "semnav/pipeline.hpp"
#include "semnav/serialization.hpp"

namespace semnav {

// method,class,accuracy,iou,f1 with one "mean" row per method.
CsvTable map_table(const std::vector<std::pair<std::string, MapMetrics>>& methods,
                   const std::vector<std::string>& class_names);

// The three projection/ensemble comparisons of one evaluation, semantic and
// occupancy, labelled "<space>/<method>".
CsvTable map_evaluation_table(const MapEvaluation& ev, const ClassCatalog& catalog, bool with_ensemble);

// subset,method,episodes,spl,spl_ci,soft_spl,soft_spl_ci,success,success_ci,dts,dts_ci,dts_m,dts_m_ci
// for the subsets all, easy and hard.
CsvTable nav_summary_table(const std::vector<MethodEvaluation>& evaluations, const std::vector<Episode>& episodes,
                           double cell_size);

CsvTable episode_table(const MethodEvaluation& evaluation, const std::vector<Episode>& episodes);
CsvTable trajectory_table(const EpisodeOutcome& outcome);
CsvTable decision_table(const EpisodeOutcome& outcome);

// Collects results/*.csv of a run directory into reports/table{1,2,3,4}.csv.
// Returns the files written.
std::vector<std::filesystem::path> build_report(const std::filesystem::path& run_dir);

}  // namespace semnav
