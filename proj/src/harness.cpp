#include "facesim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "json.hpp"

namespace facesim {

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (out_dir.empty()) throw ConfigError("config: \"out\" directory is required");
  if (raster < 32) throw ConfigError("config: raster must be at least 32");
  if (!gallery_procedural && gallery_dir.empty()) {
    throw ConfigError("config: either \"gallery\" or \"gallery_procedural\" is required");
  }
  if (!gallery_procedural && !std::filesystem::is_directory(gallery_dir)) {
    throw ConfigError("config: gallery directory does not exist: " + gallery_dir.string());
  }
  if (!heldout_dir.empty() && !std::filesystem::is_directory(heldout_dir)) {
    throw ConfigError("config: heldout directory does not exist: " + heldout_dir.string());
  }
  if (!parts_procedural && parts_manifest.empty()) {
    throw ConfigError("config: either \"parts\" or \"parts_procedural\" is required");
  }
  if (!parts_procedural && !std::filesystem::is_regular_file(parts_manifest)) {
    throw ConfigError("config: parts manifest does not exist: " + parts_manifest.string());
  }
  if (targets.empty()) throw ConfigError("config: target identity list must be non-empty");
  if (attack.seeds.empty()) throw ConfigError("config: attack seeds list must be non-empty");
  if (attack.strategy != "random" && attack.strategy != "local") {
    throw ConfigError("config: attack strategy must be \"random\" or \"local\"");
  }
  if (defenses.empty()) throw ConfigError("config: defense matrix must be non-empty");
  std::set<std::string> names;
  for (const DefenseConfig& d : defenses) {
    d.validate();
    if (d.name.empty()) throw ConfigError("config: every defense needs a name");
    if (!names.insert(d.name).second) {
      throw ConfigError("config: duplicate defense name \"" + d.name + "\"");
    }
  }
  if (m_intra < 1 || m_extra < 1 || m_fds < 1) {
    throw ConfigError("config: model component counts must be positive");
  }
  if (jobs < 1) throw ConfigError("config: jobs must be at least 1");
}

namespace {

DefenseConfig defense_from_json(const nlohmann::json& j) {
  DefenseConfig d;
  d.name = j.value("name", std::string{});
  if (j.contains("rounding_digits") && !j["rounding_digits"].is_null()) {
    d.rounding_digits = j["rounding_digits"].get<int>();
  }
  d.fdsf_enabled = j.value("fdsf_enabled", false);
  d.panel_size = j.value("panel_size", 6);
  d.mu = j.value("mu", 5);
  d.panel_seed = j.value("panel_seed", static_cast<std::uint64_t>(0));
  d.resample_panel = j.value("resample_panel", false);
  return d;
}

PartCounts counts_from_json(const nlohmann::json& j) {
  PartCounts c;
  if (j.is_array()) {
    if (j.size() != 8) {
      throw ConfigError("config: counts array must have 8 entries "
                        "(head,eyes,lips,noses,brows,hairs,glasses,mustaches)");
    }
    c.base_heads = j[0].get<int>();
    c.eyes = j[1].get<int>();
    c.lips = j[2].get<int>();
    c.noses = j[3].get<int>();
    c.brows = j[4].get<int>();
    c.hairs = j[5].get<int>();
    c.glasses = j[6].get<int>();
    c.mustaches = j[7].get<int>();
  } else {
    c.base_heads = j.value("base_heads", 1);
    c.eyes = j.value("eyes", 1);
    c.lips = j.value("lips", 1);
    c.noses = j.value("noses", 1);
    c.brows = j.value("brows", 1);
    c.hairs = j.value("hairs", 1);
    c.glasses = j.value("glasses", 1);
    c.mustaches = j.value("mustaches", 1);
  }
  return c;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config JSON in " + path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  cfg.out_dir = j.value("out", std::string{});
  cfg.raster = j.value("raster", 64);
  if (j.contains("gallery")) cfg.gallery_dir = j["gallery"].get<std::string>();
  if (j.contains("gallery_procedural")) {
    const auto& g = j["gallery_procedural"];
    GalleryProcedural gp;
    gp.identities = g.value("identities", 10);
    gp.enrolled = g.value("enrolled", 4);
    gp.heldout = g.value("heldout", 2);
    gp.seed = g.value("seed", static_cast<std::uint64_t>(11));
    cfg.gallery_procedural = gp;
  }
  if (j.contains("heldout")) cfg.heldout_dir = j["heldout"].get<std::string>();
  if (j.contains("parts")) cfg.parts_manifest = j["parts"].get<std::string>();
  if (j.contains("parts_procedural")) {
    const auto& p = j["parts_procedural"];
    PartsProcedural pp;
    if (p.contains("counts")) pp.counts = counts_from_json(p["counts"]);
    pp.seed = p.value("seed", static_cast<std::uint64_t>(7));
    pp.optional_absent = p.value("optional_absent", false);
    cfg.parts_procedural = pp;
  }
  if (j.contains("targets")) cfg.targets = j["targets"].get<std::vector<std::string>>();
  if (j.contains("models")) {
    cfg.m_intra = j["models"].value("m_intra", 16);
    cfg.m_extra = j["models"].value("m_extra", 16);
    cfg.m_fds = j["models"].value("m_fds", 20);
  }
  if (j.contains("attack")) {
    const auto& a = j["attack"];
    cfg.attack.strategy = a.value("strategy", std::string("random"));
    cfg.attack.beta = a.value("beta", 0.1);
    cfg.attack.m = a.value("m", 0.002);
    cfg.attack.epsilon = a.value("epsilon", 0.0);
    cfg.attack.max_queries = a.value("max_queries", static_cast<std::uint64_t>(UINT64_MAX));
    if (a.contains("seeds")) cfg.attack.seeds = a["seeds"].get<std::vector<std::uint64_t>>();
    if (a.contains("seed_count")) {
      // convenience: seeds 1..n derived from a base
      const auto base = a.value("seed_base", static_cast<std::uint64_t>(1));
      for (std::uint64_t i = 0; i < a["seed_count"].get<std::uint64_t>(); ++i) {
        cfg.attack.seeds.push_back(base + i);
      }
    }
  }
  if (j.contains("defenses")) {
    for (const auto& d : j["defenses"]) cfg.defenses.push_back(defense_from_json(d));
  }
  cfg.jobs = j.value("jobs", 1);
  cfg.validate();
  return cfg;
}

ExperimentAssets prepare_assets(const ExperimentConfig& config) {
  config.validate();
  ExperimentAssets assets;

  std::filesystem::path gallery_dir = config.gallery_dir;
  std::filesystem::path heldout_dir = config.heldout_dir;
  if (config.gallery_procedural) {
    const auto& gp = *config.gallery_procedural;
    const std::filesystem::path base = config.out_dir / "assets";
    gen_gallery(gp.identities, gp.enrolled, gp.heldout, gp.seed, base, config.raster);
    gallery_dir = base / "gallery";
    if (gp.heldout > 0) heldout_dir = base / "heldout";
  }
  assets.enrolled = load_labeled_images(gallery_dir);
  if (!heldout_dir.empty()) {
    for (const IdentityImages& id : load_labeled_images(heldout_dir)) {
      assets.heldout.insert(assets.heldout.end(), id.images.begin(), id.images.end());
    }
  }

  std::filesystem::path manifest = config.parts_manifest;
  if (config.parts_procedural) {
    const auto& pp = *config.parts_procedural;
    manifest = gen_procedural_parts(pp.counts, pp.seed, config.out_dir / "assets" / "parts",
                                    config.raster, pp.optional_absent);
  }
  assets.library = load_library(manifest);
  if (assets.library.width() != assets.enrolled.front().images.front().width ||
      assets.library.height() != assets.enrolled.front().images.front().height) {
    throw ConfigError("part library raster does not match gallery images");
  }

  assets.gallery = enroll(assets.enrolled, config.m_intra, config.m_extra, config.m_fds);
  for (const std::string& t : config.targets) {
    if (assets.gallery.find_identity(t) < 0) {
      throw ConfigError("target identity \"" + t + "\" is not enrolled");
    }
  }
  return assets;
}

namespace {

struct CellSpec {
  std::string identity;
  DefenseConfig defense;
  std::uint64_t seed;
};

CellResult run_cell(const ExperimentAssets& assets, const AttackSettings& attack,
                    const CellSpec& spec) {
  QueryLedger ledger;
  const OracleFn oracle = [&](const CompositeGenome& g) {
    return defended_query(assets.gallery, compose(g, assets.library), spec.identity, spec.defense,
                          ledger);
  };
  const StopParams stop =
      StopParams::derive(attack.beta, attack.m, attack.epsilon, attack.max_queries);
  const AttackTrace trace = attack.strategy == "local"
                                ? local_random_search(assets.library, oracle, stop, spec.seed)
                                : random_search(assets.library, oracle, stop, spec.seed);
  if (!trace.monotone()) {
    throw Error("(H1) violation: best-score sequence decreased in cell " + spec.identity + "/" +
                spec.defense.name + "/" + std::to_string(spec.seed));
  }
  if (trace.queries != ledger.count() || trace.queries != trace.records.size()) {
    throw Error("query accounting mismatch in cell " + spec.identity + "/" + spec.defense.name);
  }

  CellResult cell;
  cell.identity = spec.identity;
  cell.defense = spec.defense.name;
  cell.seed = spec.seed;
  cell.queries = trace.queries;

  // Ground truth evaluation never touches the attacker-facing ledger.
  const std::uint64_t ledger_before = ledger.count();
  cell.initial_true = raw_confidence(assets.gallery,
                                     compose(trace.records.front().genome, assets.library),
                                     spec.identity);
  cell.final_true =
      raw_confidence(assets.gallery, compose(trace.best, assets.library), spec.identity);
  if (ledger.count() != ledger_before) {
    throw Error("ground-truth evaluation leaked into the query ledger");
  }

  if (spec.defense.fdsf_enabled) {
    std::uint64_t flagged = 0;
    for (const QueryRecord& r : ledger.snapshot()) {
      if (r.verdict && *r.verdict == Verdict::Composite) ++flagged;
    }
    cell.flagged_fraction =
        ledger.count() ? static_cast<double>(flagged) / static_cast<double>(ledger.count()) : 0.0;
  }
  cell.trace = trace;
  return cell;
}

}  // namespace

std::vector<CellAggregate> aggregate_cells(const std::vector<CellResult>& cells) {
  std::vector<CellAggregate> out;
  for (const CellResult& cell : cells) {
    CellAggregate* agg = nullptr;
    for (CellAggregate& a : out) {
      if (a.identity == cell.identity && a.defense == cell.defense) {
        agg = &a;
        break;
      }
    }
    if (!agg) {
      out.push_back({cell.identity, cell.defense, 0, 0, 0, 0, 0, 0});
      agg = &out.back();
    }
    ++agg->runs;
    agg->mean_initial_true += cell.initial_true;
    agg->mean_final_true += cell.final_true;
    agg->mean_flagged_fraction += cell.flagged_fraction;
    agg->mean_queries += static_cast<double>(cell.queries);
  }
  for (CellAggregate& a : out) {
    const double n = static_cast<double>(a.runs);
    a.mean_initial_true /= n;
    a.mean_final_true /= n;
    a.mean_flagged_fraction /= n;
    a.mean_queries /= n;
  }
  // second pass for the standard deviation (population form)
  for (CellAggregate& a : out) {
    double ss = 0.0;
    for (const CellResult& cell : cells) {
      if (cell.identity == a.identity && cell.defense == a.defense) {
        const double d = cell.final_true - a.mean_final_true;
        ss += d * d;
      }
    }
    a.stddev_final_true = std::sqrt(ss / static_cast<double>(a.runs));
  }
  return out;
}

RunReport run_experiment(const ExperimentConfig& config) {
  const ExperimentAssets assets = prepare_assets(config);

  std::vector<CellSpec> specs;
  for (const std::string& identity : config.targets) {
    for (const DefenseConfig& defense : config.defenses) {
      for (const std::uint64_t seed : config.attack.seeds) {
        specs.push_back({identity, defense, seed});  // seeds shared across defenses
      }
    }
  }

  RunReport report;
  report.cells.resize(specs.size());
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(specs.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      report.cells[i] = run_cell(assets, config.attack, specs[i]);
    }
  } else {
    // cells are independent; results land in spec order regardless of
    // completion order
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= specs.size()) return;
          try {
            report.cells[i] = run_cell(assets, config.attack, specs[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  report.aggregates = aggregate_cells(report.cells);
  return report;
}

void emit_csv(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report CSV " + path.string());
  out << "identity,defense,seed,iteration,genome,returned_score,best_score\n";
  for (const CellResult& cell : report.cells) {
    for (const TraceRecord& r : cell.trace.records) {
      out << cell.identity << ',' << cell.defense << ',' << cell.seed << ',' << r.iteration << ','
          << '"' << genome_to_string(r.genome) << '"' << ',' << fmt(r.returned_score) << ','
          << fmt(r.best_score) << '\n';
    }
  }
  if (!out) throw ConfigError("I/O failure writing " + path.string());
}

void emit_summary_csv(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write summary CSV " + path.string());
  out << "identity,defense,runs,mean_initial_true,mean_final_true,stddev_final_true,"
         "mean_flagged_fraction,mean_queries\n";
  for (const CellAggregate& a : report.aggregates) {
    out << a.identity << ',' << a.defense << ',' << a.runs << ',' << fmt(a.mean_initial_true)
        << ',' << fmt(a.mean_final_true) << ',' << fmt(a.stddev_final_true) << ','
        << fmt(a.mean_flagged_fraction) << ',' << fmt(a.mean_queries) << '\n';
  }
  if (!out) throw ConfigError("I/O failure writing " + path.string());
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

void emit_svg_curves(const RunReport& report, const std::filesystem::path& path) {
  std::uint64_t max_iter = 1;
  for (const CellResult& cell : report.cells) {
    max_iter = std::max(max_iter, cell.trace.iterations);
  }

  // plot geometry
  const double width = 900, height = 560;
  const double left = 70, right = 880, top = 40, bottom = 500;
  const auto x_of = [&](double it) { return left + (right - left) * it / double(max_iter); };
  const auto y_of = [&](double score) { return bottom - (bottom - top) * score; };

  std::vector<std::string> defense_order;
  for (const CellResult& cell : report.cells) {
    if (std::find(defense_order.begin(), defense_order.end(), cell.defense) ==
        defense_order.end()) {
      defense_order.push_back(cell.defense);
    }
  }

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write SVG " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << (left + right) / 2
      << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
         "Best returned confidence vs. queries</text>\n";

  // axes
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    out << "<line x1=\"" << left - 4 << "\" y1=\"" << y_of(v) << "\" x2=\"" << left << "\" y2=\""
        << y_of(v) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y_of(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v, "%.1f")
        << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double it = max_iter * i / 5.0;
    out << "<line x1=\"" << x_of(it) << "\" y1=\"" << bottom << "\" x2=\"" << x_of(it)
        << "\" y2=\"" << bottom + 4 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x_of(it) << "\" y=\"" << bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(it, "%.0f") << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 40
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">iteration"
         "</text>\n";
  out << "<text x=\"18\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << (top + bottom) / 2 << ")\">returned confidence</text>\n";

  // one staircase polyline per cell
  for (const CellResult& cell : report.cells) {
    const std::size_t di =
        std::find(defense_order.begin(), defense_order.end(), cell.defense) -
        defense_order.begin();
    const char* color = kPalette[di % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-opacity=\"0.55\" "
        << "stroke-width=\"1.2\" points=\"";
    double last_y = 0.0;
    for (std::size_t i = 0; i < cell.trace.records.size(); ++i) {
      const TraceRecord& r = cell.trace.records[i];
      const double x = x_of(static_cast<double>(r.iteration));
      const double y = y_of(r.best_score);
      if (i > 0) out << fmt(x, "%.2f") << ',' << fmt(last_y, "%.2f") << ' ';  // staircase step
      out << fmt(x, "%.2f") << ',' << fmt(y, "%.2f") << ' ';
      last_y = y;
    }
    // extend to the final iteration
    out << fmt(x_of(static_cast<double>(cell.trace.iterations)), "%.2f") << ','
        << fmt(last_y, "%.2f");
    out << "\"/>\n";
  }

  // legend
  double ly = top + 8;
  for (std::size_t di = 0; di < defense_order.size(); ++di) {
    out << "<line x1=\"" << right - 150 << "\" y1=\"" << ly << "\" x2=\"" << right - 120
        << "\" y2=\"" << ly << "\" stroke=\"" << kPalette[di % 8] << "\" stroke-width=\"3\"/>\n";
    out << "<text x=\"" << right - 112 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << defense_order[di] << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  if (!out) throw ConfigError("I/O failure writing " + path.string());
}

namespace {

void emit_trace_csv(const CellResult& cell, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trace CSV " + path.string());
  out << "iteration,genome,returned_score,best_score\n";
  for (const TraceRecord& r : cell.trace.records) {
    out << r.iteration << ',' << '"' << genome_to_string(r.genome) << '"' << ','
        << fmt(r.returned_score) << ',' << fmt(r.best_score) << '\n';
  }
}

void emit_run_summary(const CellResult& cell, const std::filesystem::path& path) {
  nlohmann::json j;
  j["identity"] = cell.identity;
  j["defense"] = cell.defense;
  j["seed"] = cell.seed;
  j["iterations"] = cell.trace.iterations;
  j["queries"] = cell.queries;
  j["best_returned_score"] = cell.trace.best_score;
  j["best_genome"] = genome_to_string(cell.trace.best);
  j["initial_true_similarity"] = cell.initial_true;
  j["final_true_similarity"] = cell.final_true;
  j["flagged_fraction"] = cell.flagged_fraction;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write run summary " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

void emit_all(const RunReport& report, const ExperimentAssets& assets,
              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "traces");
  std::filesystem::create_directories(out_dir / "recon");
  emit_csv(report, out_dir / "report.csv");
  emit_summary_csv(report, out_dir / "summary.csv");
  emit_svg_curves(report, out_dir / "curves.svg");
  for (const CellResult& cell : report.cells) {
    const std::string stem =
        cell.identity + "_" + cell.defense + "_" + std::to_string(cell.seed);
    emit_trace_csv(cell, out_dir / "traces" / ("trace_" + stem + ".csv"));
    emit_run_summary(cell, out_dir / "traces" / ("trace_" + stem + ".json"));
    write_pgm(compose(cell.trace.best, assets.library),
              out_dir / "recon" / ("recon_" + stem + ".pgm"));
  }
}

RankStudy fds_ranking_study_probes(const Gallery& gallery, const std::vector<FaceImage>& probes,
                                   int panel_size, int mu, std::uint64_t seed) {
  RankStudy study;
  study.panel_size = panel_size;
  study.mu = mu;
  study.histogram.assign(static_cast<std::size_t>(panel_size) + 2, 0);
  std::uint64_t flagged = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Panel panel = draw_panel(gallery, panel_size, derive_seed(seed, i));
    const int rank = fds_rank(gallery, probes[i], panel);
    study.ranks.push_back(rank);
    ++study.histogram[static_cast<std::size_t>(rank)];
    if (fdsf_decision(rank, mu) == Verdict::Composite) ++flagged;
  }
  study.flagged_fraction =
      probes.empty() ? 0.0 : static_cast<double>(flagged) / static_cast<double>(probes.size());
  return study;
}

RankStudy fds_ranking_study(const Gallery& gallery, const PartLibrary& library, int n_composites,
                            int panel_size, int mu, std::uint64_t seed) {
  if (n_composites < 0) throw ConfigError("composite count must be non-negative");
  Rng rng(derive_seed(seed, 0xC0C0));
  std::vector<FaceImage> probes;
  probes.reserve(static_cast<std::size_t>(n_composites));
  for (int i = 0; i < n_composites; ++i) {
    probes.push_back(compose(random_genome(library, rng), library));
  }
  return fds_ranking_study_probes(gallery, probes, panel_size, mu, seed);
}

void emit_ranks_csv(const std::vector<std::pair<std::string, RankStudy>>& studies,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write ranks CSV " + path.string());
  out << "source,probe_index,rank,flagged\n";
  for (const auto& [source, study] : studies) {
    for (std::size_t i = 0; i < study.ranks.size(); ++i) {
      const bool flagged = fdsf_decision(study.ranks[i], study.mu) == Verdict::Composite;
      out << source << ',' << i << ',' << study.ranks[i] << ',' << (flagged ? 1 : 0) << '\n';
    }
  }
  if (!out) throw ConfigError("I/O failure writing " + path.string());
}

}  // namespace facesim
