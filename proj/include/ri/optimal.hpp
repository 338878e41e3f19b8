#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ri/lk_spaces.hpp"
#include "ri/operators.hpp"

namespace ri {

/// Nonincreasing step function starting at 0: log-uniform breakpoints in [1e-3, 1e3],
/// exponentially distributed value gaps.
StepFunction random_nonincreasing(std::mt19937_64& rng, int cells = 8);

/// Norm of a nonnegative piecewise power function in a described LK space.
double description_norm(const SpaceDescription& S, const PiecewisePower& h, const NormOptions& opt = {});

/// t^{m/D-1} chi_(1,inf) belongs to X'.
bool target_condition(const LKSpace& X, const SmoothnessParams& sp);
/// inf_{t >= 1} t^{1-m/D} / phi_Y(t) > 0.
bool domain_condition(const LKSpace& Y, const SmoothnessParams& sp);

/// || t^{m/D} v** ||_{X'}; throws NonExistentError when the target condition fails.
double zm_norm(const StepFunction& v, const LKSpace& X, const SmoothnessParams& sp,
               const NormOptions& opt = {});

struct UmValue {
  double value = 0.0;
  /// false when only a lower bound over equimeasurable rearrangements is available
  bool exact_form = true;
};
/// || int_t^inf v(tau) tau^{m/D-1} dtau ||_Y maximised over v equimeasurable with f.
UmValue um_norm(const StepFunction& f, const LKSpace& Y, const SmoothnessParams& sp,
                const NormOptions& opt = {}, int rearrangements = 32, std::uint64_t seed = 1);

struct EquivalenceOptions {
  int family_size = 30;
  std::uint64_t seed = 1;
  NormOptions norm{};
  int refine = 4;
  bool ratios = true;
};

struct OptimalityReport {
  std::string input;
  std::string condition;
  bool verdict = false;
  SpaceDescription output;
  std::string case_label;
  std::optional<double> ratio_min;
  std::optional<double> ratio_max;
  std::optional<double> grid_refinement_drift;
  std::vector<std::string> flags;
};

OptimalityReport optimal_target(const LKSpace& X, const SmoothnessParams& sp,
                                const EquivalenceOptions& eo = {});
OptimalityReport optimal_domain(const LKSpace& Y, const SmoothnessParams& sp,
                                const EquivalenceOptions& eo = {});

struct RatioStats {
  double min = 0.0;
  double max = 0.0;
  /// max(max, 1/min)
  double constant() const;
};
/// Ratios num(f)/den(f) over a random nonincreasing family.
template <class Num, class Den>
RatioStats ratio_stats(Num&& num, Den&& den, int family_size, std::uint64_t seed);

struct EmbeddingWitness {
  bool found = false;
  std::string window;
  double ratio_first = 0.0;
  double ratio_last = 0.0;
};
/// Searches truncated powers t^{-1/p} chi_(s,S) near 0 and near inf for which
/// ||g||_candidate / ||g||_target grows without bound.
EmbeddingWitness embedding_witness(const LKSpace& target, const LKSpace& candidate,
                                   const NormOptions& opt = {});

/// || t^{(m-1)/D} (tau^{1/D} v**)** ||_{X'} / || t^{m/D} v** ||_{X'}; 1 for v = 0.
double iteration_check(const StepFunction& v, const LKSpace& X, const SmoothnessParams& sp,
                       const NormOptions& opt = {});

template <class Num, class Den>
RatioStats ratio_stats(Num&& num, Den&& den, int family_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RatioStats s{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < family_size; ++i) {
    const StepFunction f = random_nonincreasing(rng);
    const double r = num(f) / den(f);
    s.min = std::min(s.min, r);
    s.max = std::max(s.max, r);
  }
  return s;
}

}  // namespace ri
