#include "facesim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "facesim/error.hpp"
#include "facesim/rng.hpp"

namespace facesim {

double logistic_confidence(double similarity, const Calibration& cal) {
  return 1.0 / (1.0 + std::exp(-(similarity - cal.s0) / cal.tau));
}

int Gallery::find_identity(const std::string& name) const {
  for (std::size_t i = 0; i < identities.size(); ++i) {
    if (identities[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw MathError("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// sigma(2.2) = 0.9002; placing the genuine median at +2.2 tau and the
// impostor median at -2.2 tau lands them near 0.9 / 0.1.
constexpr double kCalibrationSpread = 4.4;

}  // namespace

Gallery enroll(const LabeledImages& images, int m_intra, int m_extra, int m_fds,
               std::uint64_t seed) {
  if (images.size() < 2) throw MathError("enrollment needs at least 2 identities");
  Gallery g;
  g.identities = images;
  g.dual = train_dual(g.identities, m_intra, m_extra, derive_seed(seed, 1));

  std::vector<FaceImage> all;
  for (const IdentityImages& id : g.identities) {
    all.insert(all.end(), id.images.begin(), id.images.end());
  }
  g.fds_model = train_pca(all, m_fds);

  for (int i = 0; i < static_cast<int>(g.identities.size()); ++i) {
    for (int j = 0; j < static_cast<int>(g.identities[i].images.size()); ++j) {
      g.enrolled.push_back({i, j, fds(g.fds_model, g.identities[i].images[j])});
    }
  }

  // calibration from enrollment-data medians
  std::vector<double> genuine;
  for (const IdentityImages& id : g.identities) {
    for (std::size_t a = 0; a < id.images.size(); ++a) {
      for (std::size_t b = a + 1; b < id.images.size(); ++b) {
        genuine.push_back(similarity_st(g.dual, id.images[a], id.images[b]));
      }
    }
  }
  if (genuine.empty()) {
    throw MathError("calibration needs at least one same-identity image pair");
  }
  Rng rng(derive_seed(seed, 2));
  std::vector<double> impostor;
  while (impostor.size() < genuine.size()) {
    const std::size_t ia = uniform_index(rng, g.identities.size());
    const std::size_t ib = uniform_index(rng, g.identities.size());
    if (ia == ib) continue;
    const auto& va = g.identities[ia].images;
    const auto& vb = g.identities[ib].images;
    impostor.push_back(similarity_st(g.dual, va[uniform_index(rng, va.size())],
                                     vb[uniform_index(rng, vb.size())]));
  }
  g.genuine_median = median(genuine);
  g.impostor_median = median(impostor);
  if (!(g.genuine_median > g.impostor_median)) {
    throw MathError("genuine-pair similarity does not exceed impostor similarity; "
                    "gallery is not calibratable");
  }
  g.calibration.s0 = 0.5 * (g.genuine_median + g.impostor_median);
  g.calibration.tau = (g.genuine_median - g.impostor_median) / kCalibrationSpread;
  return g;
}

LabeledImages load_labeled_images(const std::filesystem::path& gallery_dir) {
  if (!std::filesystem::is_directory(gallery_dir)) {
    throw ManifestError("gallery directory not found: " + gallery_dir.string());
  }
  LabeledImages out;
  std::vector<std::filesystem::path> id_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(gallery_dir)) {
    if (entry.is_directory()) id_dirs.push_back(entry.path());
  }
  std::sort(id_dirs.begin(), id_dirs.end());
  for (const auto& dir : id_dirs) {
    IdentityImages id;
    id.name = dir.filename().string();
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) id.images.push_back(read_pgm(f));
    if (!id.images.empty()) out.push_back(std::move(id));
  }
  if (out.empty()) throw ManifestError("no identities found under " + gallery_dir.string());
  return out;
}

double raw_confidence(const Gallery& gallery, const FaceImage& probe,
                      const std::string& identity) {
  const int idx = gallery.find_identity(identity);
  if (idx < 0) throw ConfigError("unknown identity \"" + identity + "\"");
  double best = -std::numeric_limits<double>::infinity();
  for (const FaceImage& enrolled : gallery.identities[idx].images) {
    best = std::max(best, similarity_st(gallery.dual, probe, enrolled));
  }
  return logistic_confidence(best, gallery.calibration);
}

double round_confidence(double score, std::optional<int> digits) {
  if (!digits) return score;
  if (*digits < 0 || *digits > 6) throw ConfigError("rounding digits must be in [0,6]");
  const double factor = std::pow(10.0, *digits);
  return std::round(score * factor) / factor;  // std::round: half away from zero
}

Panel draw_panel(const Gallery& gallery, int panel_size, std::uint64_t panel_seed) {
  if (panel_size < 1) throw ConfigError("panel size must be positive");
  if (panel_size > static_cast<int>(gallery.enrolled.size())) {
    throw ConfigError("panel size exceeds enrolled face count");
  }
  Rng rng(panel_seed);
  std::set<std::uint64_t> chosen;
  Panel panel;
  while (static_cast<int>(panel.members.size()) < panel_size) {
    const std::uint64_t pick = uniform_index(rng, gallery.enrolled.size());
    if (!chosen.insert(pick).second) continue;
    panel.members.push_back(gallery.enrolled[pick]);
  }
  return panel;
}

int fds_rank(const Gallery& gallery, const FaceImage& probe, const Panel& panel) {
  if (panel.members.empty()) throw ConfigError("FDS ranking needs a non-empty panel");
  const double probe_fds = fds(gallery.fds_model, probe);
  int below = 0;
  for (const EnrolledFace& member : panel.members) {
    // <= : ties rank the probe above the panel member, so a genuine face
    // equal to a panel face is never flagged
    if (member.fds_score <= probe_fds) ++below;
  }
  return 1 + below;
}

Verdict fdsf_decision(int rank, int mu) {
  if (rank < 1) throw ConfigError("FDS rank must be at least 1");
  if (mu < 1) throw ConfigError("FDSF threshold mu must be at least 1");
  return rank < mu ? Verdict::Composite : Verdict::Genuine;
}

void DefenseConfig::validate() const {
  if (rounding_digits && (*rounding_digits < 0 || *rounding_digits > 6)) {
    throw ConfigError("rounding digits must be in [0,6]");
  }
  if (fdsf_enabled) {
    if (panel_size < 1) throw ConfigError("FDSF panel size must be positive");
    if (mu < 1 || mu > panel_size + 1) {
      throw ConfigError("FDSF threshold mu must be in [1, panel_size+1]");
    }
  }
}

std::uint64_t QueryLedger::append(QueryRecord record) {
  std::lock_guard<std::mutex> lock(mutex_);
  record.index = records_.size();
  records_.push_back(std::move(record));
  return records_.size();
}

std::uint64_t QueryLedger::count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_.size();
}

std::vector<QueryRecord> QueryLedger::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_;
}

void QueryLedger::to_csv(const std::filesystem::path& path) const {
  const std::vector<QueryRecord> records = snapshot();
  std::ofstream out(path);
  if (!out) throw ManifestError("cannot write ledger CSV " + path.string());
  out << "query_index,identity,probe_sha256,raw_score,returned_score,fdsf_verdict,rank\n";
  char buf[64];
  for (const QueryRecord& r : records) {
    out << r.index << ',' << r.identity << ',' << r.probe_sha256 << ',';
    if (std::isnan(r.raw_score)) {
      out << ',';
    } else {
      std::snprintf(buf, sizeof buf, "%.12g,", r.raw_score);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g,", r.returned_score);
    out << buf;
    out << (r.verdict ? to_string(*r.verdict) : "") << ',';
    if (r.rank > 0) out << r.rank;
    out << '\n';
  }
  if (!out) throw ManifestError("I/O failure writing ledger CSV " + path.string());
}

double defended_query(const Gallery& gallery, const FaceImage& probe, const std::string& identity,
                      const DefenseConfig& defense, QueryLedger& ledger) {
  defense.validate();
  if (gallery.find_identity(identity) < 0) {
    throw ConfigError("unknown identity \"" + identity + "\"");
  }

  QueryRecord record;
  record.identity = identity;
  record.probe_sha256 = sha256_hex(probe);

  if (defense.fdsf_enabled) {
    const std::uint64_t seed = defense.resample_panel
                                   ? derive_seed(defense.panel_seed, ledger.count())
                                   : defense.panel_seed;
    const Panel panel = draw_panel(gallery, defense.panel_size, seed);
    record.rank = fds_rank(gallery, probe, panel);
    record.verdict = fdsf_decision(record.rank, defense.mu);
    if (*record.verdict == Verdict::Composite) {
      // decoy: maximum confidence, raw score never computed
      record.raw_score = std::numeric_limits<double>::quiet_NaN();
      record.returned_score = 1.0;
      ledger.append(std::move(record));
      return 1.0;
    }
  }

  record.raw_score = raw_confidence(gallery, probe, identity);
  record.returned_score = round_confidence(record.raw_score, defense.rounding_digits);
  const double returned = record.returned_score;
  ledger.append(std::move(record));
  return returned;
}

}  // namespace facesim
