#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "facesim/attacker.hpp"
#include "facesim/oracle.hpp"
#include "facesim/procedural.hpp"

namespace facesim {

struct AttackSettings {
  std::string strategy = "random";  // "random" or "local"
  double beta = 0.1;
  double m = 0.002;
  double epsilon = 0.0;
  std::uint64_t max_queries = UINT64_MAX;
  std::vector<std::uint64_t> seeds;
};

struct GalleryProcedural {
  int identities = 10;
  int enrolled = 4;
  int heldout = 2;
  std::uint64_t seed = 11;
};

struct PartsProcedural {
  PartCounts counts;
  std::uint64_t seed = 7;
  bool optional_absent = false;
};

// One experiment: a gallery, a part library, target identities, attack
// parameters, and a matrix of defenses swept over shared seeds.
struct ExperimentConfig {
  std::filesystem::path out_dir;
  int raster = 64;
  std::filesystem::path gallery_dir;               // or generated:
  std::optional<GalleryProcedural> gallery_procedural;
  std::filesystem::path heldout_dir;               // optional unless rank study
  std::filesystem::path parts_manifest;            // or generated:
  std::optional<PartsProcedural> parts_procedural;
  std::vector<std::string> targets;
  int m_intra = 16;
  int m_extra = 16;
  int m_fds = 20;
  AttackSettings attack;
  std::vector<DefenseConfig> defenses;
  int jobs = 1;

  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

// One (identity, defense, seed) attack run with its ground-truth evaluation.
// true_* scores come from the undefended raw_confidence path, which the
// attacker never sees.
struct CellResult {
  std::string identity;
  std::string defense;
  std::uint64_t seed = 0;
  AttackTrace trace;
  double initial_true = 0.0;
  double final_true = 0.0;
  double flagged_fraction = 0.0;  // of ledger records, FDSF cells only
  std::uint64_t queries = 0;
};

struct CellAggregate {
  std::string identity;
  std::string defense;
  std::uint64_t runs = 0;
  double mean_initial_true = 0.0;
  double mean_final_true = 0.0;
  double stddev_final_true = 0.0;
  double mean_flagged_fraction = 0.0;
  double mean_queries = 0.0;
};

struct RunReport {
  std::vector<CellResult> cells;          // ordered identity > defense > seed
  std::vector<CellAggregate> aggregates;  // ordered identity > defense
};

// Materialized assets shared by experiment and rank study entry points.
struct ExperimentAssets {
  LabeledImages enrolled;
  std::vector<FaceImage> heldout;  // flattened held-out probes
  PartLibrary library;
  Gallery gallery;
};

ExperimentAssets prepare_assets(const ExperimentConfig& config);

RunReport run_experiment(const ExperimentConfig& config);

// Recomputes the aggregates from raw cells (test hook for the reporting
// invariant).
std::vector<CellAggregate> aggregate_cells(const std::vector<CellResult>& cells);

// Per-iteration rows:
//   identity,defense,seed,iteration,genome,returned_score,best_score
void emit_csv(const RunReport& report, const std::filesystem::path& path);
// Aggregate rows per (identity, defense).
void emit_summary_csv(const RunReport& report, const std::filesystem::path& path);
// Best-returned-score staircase per (identity, defense, seed), colored by
// defense. Dependency-free SVG.
void emit_svg_curves(const RunReport& report, const std::filesystem::path& path);
// Everything the report subcommand writes: report.csv, summary.csv,
// curves.svg, per-run trace CSV + JSON summaries, reconstruction PGMs.
void emit_all(const RunReport& report, const ExperimentAssets& assets,
              const std::filesystem::path& out_dir);

// FDS rank study: every probe is ranked against a fresh seeded panel of
// enrolled faces; flagged means rank < mu.
struct RankStudy {
  int panel_size = 6;
  int mu = 5;
  std::vector<int> ranks;               // one per probe
  std::vector<std::uint64_t> histogram; // histogram[r] = count of rank r; index 0 unused
  double flagged_fraction = 0.0;
};

RankStudy fds_ranking_study(const Gallery& gallery, const PartLibrary& library, int n_composites,
                            int panel_size, int mu, std::uint64_t seed);
RankStudy fds_ranking_study_probes(const Gallery& gallery, const std::vector<FaceImage>& probes,
                                   int panel_size, int mu, std::uint64_t seed);

// ranks.csv rows: source,probe_index,rank,flagged
void emit_ranks_csv(const std::vector<std::pair<std::string, RankStudy>>& studies,
                    const std::filesystem::path& path);

}  // namespace facesim
