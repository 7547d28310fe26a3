#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "facesim/error.hpp"
#include "facesim/parts.hpp"

namespace facesim {

// Smallest integer N such that N >= ln(beta)/ln(1-m): after N independent
// draws with per-draw hit probability >= m, the miss probability is <= beta.
int stopping_bound(double beta, double m);

struct StopParams {
  double beta = 0.1;
  double m = 0.001;          // lower bound on the per-draw hit probability
  double epsilon = 0.0;      // half-width of the optimality region
  int n_beta = 1;            // derived iteration bound
  std::uint64_t max_queries = UINT64_MAX;  // hard cap on oracle queries

  static StopParams derive(double beta, double m, double epsilon = 0.0,
                           std::uint64_t max_queries = UINT64_MAX);
  void validate() const;
};

struct TraceRecord {
  std::uint64_t iteration = 0;  // draw index; 0 is the initial point
  CompositeGenome genome;
  double returned_score = 0.0;
  bool accepted = false;
  double best_score = 0.0;  // after this query
};

struct AttackTrace {
  std::vector<TraceRecord> records;  // one per oracle query (memo hits excluded)
  CompositeGenome best;
  double best_score = 0.0;
  std::uint64_t iterations = 0;  // draws performed, including memoized repeats
  std::uint64_t queries = 0;     // oracle queries == records.size()

  // (H1): the best-score sequence never decreases.
  bool monotone() const;
};

using OracleFn = std::function<double(const CompositeGenome&)>;

// Thrown when the oracle fails mid-run; carries the partial trace.
struct OracleFailure : Error {
  AttackTrace partial;
  OracleFailure(const std::string& msg, AttackTrace trace)
      : Error(msg), partial(std::move(trace)) {}
};

// Exhaustive scoring of the genome space through the undefended oracle.
// Doubles as the brute-force ground truth for convergence experiments.
struct EnumerationResult {
  std::uint64_t space_size = 0;
  double f_star = 0.0;             // exhaustive maximum
  CompositeGenome best;
  std::uint64_t optima_count = 0;  // genomes with score >= f_star - epsilon
  double m = 0.0;                  // optima_count / space_size
};

EnumerationResult estimate_m(const PartLibrary& lib, const OracleFn& undefended_oracle,
                             double epsilon, std::uint64_t enumeration_cap = 1'000'000);

// Pure random search: x0 uniform, each iteration draws xi uniformly,
// queries the oracle once per fresh genome (scores are memoized within the
// run), and accepts strict improvements of the returned score. Terminates
// after n_beta draws or max_queries oracle queries.
AttackTrace random_search(const PartLibrary& lib, const OracleFn& oracle, const StopParams& stop,
                          std::uint64_t seed);

// Neighborhood variant: the proposal mutates one uniformly chosen category
// of the incumbent (a fresh index when the category has more than one
// choice). Acceptance identical to random_search.
AttackTrace local_random_search(const PartLibrary& lib, const OracleFn& oracle,
                                const StopParams& stop, std::uint64_t seed);

}  // namespace facesim
