#include "facesim/attacker.hpp"

#include <cmath>
#include <unordered_map>

#include "facesim/rng.hpp"

namespace facesim {

int stopping_bound(double beta, double m) {
  if (!(beta > 0.0 && beta < 1.0)) throw MathError("beta must lie in (0,1)");
  if (!(m > 0.0 && m < 1.0)) throw MathError("m must lie in (0,1)");
  const long double ratio = std::log(static_cast<long double>(beta)) /
                            std::log(1.0L - static_cast<long double>(m));
  const long double bound = std::ceil(ratio);
  if (bound > static_cast<long double>(INT32_MAX)) throw MathError("stopping bound overflows int");
  return std::max(1, static_cast<int>(bound));
}

StopParams StopParams::derive(double beta, double m, double epsilon, std::uint64_t max_queries) {
  StopParams p;
  p.beta = beta;
  p.m = m;
  p.epsilon = epsilon;
  p.n_beta = stopping_bound(beta, m);
  p.max_queries = max_queries;
  p.validate();
  return p;
}

void StopParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw MathError("beta must lie in (0,1)");
  if (!(m > 0.0 && m < 1.0)) throw MathError("m must lie in (0,1)");
  if (n_beta < 1) throw MathError("n_beta must be at least 1");
  if (epsilon < 0.0) throw MathError("epsilon must be non-negative");
  if (max_queries < 1) throw MathError("max_queries must be at least 1");
}

bool AttackTrace::monotone() const {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].best_score < records[i - 1].best_score) return false;
  }
  return true;
}

EnumerationResult estimate_m(const PartLibrary& lib, const OracleFn& undefended_oracle,
                             double epsilon, std::uint64_t enumeration_cap) {
  if (epsilon < 0.0) throw MathError("epsilon must be non-negative");
  EnumerationResult result;
  result.space_size = state_space_size(lib);
  if (result.space_size > enumeration_cap) {
    throw MathError("state space of " + std::to_string(result.space_size) +
                    " genomes exceeds the enumeration cap of " + std::to_string(enumeration_cap));
  }

  std::vector<double> scores;
  scores.reserve(result.space_size);
  bool first = true;
  for_each_genome(lib, [&](const CompositeGenome& g) {
    const double s = undefended_oracle(g);
    if (first || s > result.f_star) {
      result.f_star = s;
      result.best = g;
      first = false;
    }
    scores.push_back(s);
  });

  for (const double s : scores) {
    if (s >= result.f_star - epsilon) ++result.optima_count;
  }
  result.m = static_cast<double>(result.optima_count) / static_cast<double>(result.space_size);
  return result;
}

namespace {

struct SearchState {
  AttackTrace trace;
  std::unordered_map<std::uint64_t, double> memo;

  // Returns the returned score for the genome, querying the oracle only for
  // fresh genomes. Repeated genomes reuse the memoized score, so identical
  // probes can never appear to change value mid-run.
  double query(const CompositeGenome& g, const PartLibrary& lib, const OracleFn& oracle,
               std::uint64_t iteration, bool* fresh) {
    const std::uint64_t key = genome_key(g, lib);
    if (const auto it = memo.find(key); it != memo.end()) {
      *fresh = false;
      return it->second;
    }
    double score;
    try {
      score = oracle(g);
    } catch (const std::exception& e) {
      trace.iterations = iteration;
      throw OracleFailure(std::string("oracle failed at iteration ") + std::to_string(iteration) +
                              ": " + e.what(),
                          std::move(trace));
    }
    memo.emplace(key, score);
    ++trace.queries;
    *fresh = true;
    return score;
  }
};

AttackTrace run_search(const PartLibrary& lib, const OracleFn& oracle, const StopParams& stop,
                       std::uint64_t seed, bool local) {
  stop.validate();
  Rng rng(seed);
  SearchState state;

  CompositeGenome incumbent = random_genome(lib, rng);
  bool fresh = false;
  double best = state.query(incumbent, lib, oracle, 0, &fresh);
  state.trace.records.push_back({0, incumbent, best, true, best});
  state.trace.best = incumbent;
  state.trace.best_score = best;

  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(stop.n_beta); ++k) {
    if (state.trace.queries >= stop.max_queries) break;
    state.trace.iterations = k;

    CompositeGenome candidate;
    if (local) {
      candidate = incumbent;
      const int cat = static_cast<int>(uniform_index(rng, kCategoryCount));
      const int n = lib.choices(static_cast<PartCategory>(cat));
      if (n > 1) {
        // a fresh index, never the current one
        int idx = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n - 1)));
        if (idx >= candidate.index[cat]) ++idx;
        candidate.index[cat] = idx;
      }
    } else {
      candidate = random_genome(lib, rng);
    }

    const double score = state.query(candidate, lib, oracle, k, &fresh);
    const bool accepted = score > state.trace.best_score;  // strict improvement
    if (fresh) {
      state.trace.records.push_back(
          {k, candidate, score, accepted, std::max(score, state.trace.best_score)});
    }
    if (accepted) {
      incumbent = candidate;
      state.trace.best = candidate;
      state.trace.best_score = score;
    }
  }
  return std::move(state.trace);
}

}  // namespace

AttackTrace random_search(const PartLibrary& lib, const OracleFn& oracle, const StopParams& stop,
                          std::uint64_t seed) {
  return run_search(lib, oracle, stop, seed, false);
}

AttackTrace local_random_search(const PartLibrary& lib, const OracleFn& oracle,
                                const StopParams& stop, std::uint64_t seed) {
  return run_search(lib, oracle, stop, seed, true);
}

}  // namespace facesim
