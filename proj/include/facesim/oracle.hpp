#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "facesim/eigenspace.hpp"
#include "facesim/image.hpp"

namespace facesim {

// Logistic mapping from raw S_T similarity to a [0,1] confidence score.
struct Calibration {
  double s0 = 0.0;   // similarity mapped to 0.5
  double tau = 1.0;  // temperature, > 0
};

double logistic_confidence(double similarity, const Calibration& cal);

// One enrolled face, flattened for panel sampling.
struct EnrolledFace {
  int identity = 0;   // index into Gallery::identities
  int image = 0;      // index within the identity
  double fds_score = 0.0;
};

// The target face recognition service: enrolled identities, the trained
// similarity and face-detection models, and the score calibration.
// Immutable after enroll(); safe for concurrent readers.
struct Gallery {
  LabeledImages identities;
  DualSpaceModel dual;
  EigenModel fds_model;
  Calibration calibration;
  std::vector<EnrolledFace> enrolled;  // flattened, with cached FDS scores
  double genuine_median = 0.0;
  double impostor_median = 0.0;

  int find_identity(const std::string& name) const;  // -1 when absent
};

inline constexpr std::uint64_t kDefaultEnrollSeed = 0x5eedf00dULL;

// Trains dual and FDS models on the labeled set and calibrates (s0, tau)
// from the genuine/impostor S_T medians so the genuine median maps to 0.9.
Gallery enroll(const LabeledImages& images, int m_intra, int m_extra, int m_fds,
               std::uint64_t seed = kDefaultEnrollSeed);

// Reads gallery/<identity>/<n>.pgm into a labeled set (identities and images
// ordered by name).
LabeledImages load_labeled_images(const std::filesystem::path& gallery_dir);

// sigma((S_best - s0)/tau) with S_best the maximum similarity between the
// probe and the identity's enrolled images.
double raw_confidence(const Gallery& gallery, const FaceImage& probe, const std::string& identity);

// Decimal rounding, half away from zero; nullopt digits = identity.
double round_confidence(double score, std::optional<int> digits);

// k enrolled faces sampled without replacement, deterministic per seed.
struct Panel {
  std::vector<EnrolledFace> members;
};

Panel draw_panel(const Gallery& gallery, int panel_size, std::uint64_t panel_seed);

// 1 + number of panel faces whose FDS is strictly below the probe's
// (rank 1 = lowest FDS; ties favor the probe).
int fds_rank(const Gallery& gallery, const FaceImage& probe, const Panel& panel);

enum class Verdict { Composite, Genuine };

inline const char* to_string(Verdict v) {
  return v == Verdict::Composite ? "composite" : "genuine";
}

// Composite iff rank < mu.
Verdict fdsf_decision(int rank, int mu);

struct DefenseConfig {
  std::string name = "none";
  std::optional<int> rounding_digits;  // nullopt = no rounding
  bool fdsf_enabled = false;
  int panel_size = 6;
  int mu = 5;
  std::uint64_t panel_seed = 0;
  bool resample_panel = false;  // false: one fixed panel per experiment

  void validate() const;
};

struct QueryRecord {
  std::uint64_t index = 0;
  std::string identity;
  std::string probe_sha256;
  double raw_score = 0.0;  // NaN when FDSF short-circuited the query
  double returned_score = 0.0;
  std::optional<Verdict> verdict;  // set only when FDSF ran
  int rank = 0;                    // 0 when FDSF did not run
};

// Append-only query log. Appends are serialized; order is the serialization
// order.
class QueryLedger {
 public:
  std::uint64_t append(QueryRecord record);
  std::uint64_t count() const;
  std::vector<QueryRecord> snapshot() const;
  void to_csv(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mutex_;
  std::vector<QueryRecord> records_;
};

// The attacker-facing endpoint. With FDSF enabled, a probe ranked below mu
// receives the decoy score 1.0 and the raw confidence is never computed;
// otherwise the rounded raw confidence is returned. Every call appends one
// ledger record.
double defended_query(const Gallery& gallery, const FaceImage& probe, const std::string& identity,
                      const DefenseConfig& defense, QueryLedger& ledger);

}  // namespace facesim
