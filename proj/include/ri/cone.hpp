#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ri {

/// Orthant-type cone {x in R^n : x_1..x_k > 0} with the monomial weight
/// w(x) = x_1^{A_1} ... x_k^{A_k}.
class MonomialCone {
 public:
  MonomialCone(int n, int k, std::vector<double> A);

  int n() const { return n_; }
  int k() const { return k_; }
  const std::vector<double>& A() const { return A_; }
  double alpha() const { return alpha_; }
  double D() const { return D_; }
  /// mu-measure of the unit ball intersected with the cone.
  double B_mu() const { return B_mu_; }

 private:
  int n_;
  int k_;
  std::vector<double> A_;
  double alpha_;
  double D_;
  double B_mu_;
};

double weight_eval(const MonomialCone& cone, std::span<const double> x);

/// prod Gamma((A_i+1)/2) pi^{(n-k)/2} / (2^k Gamma(D/2+1))
double ball_measure(const MonomialCone& cone);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Monte Carlo estimate of int_{B_1 cap Sigma} w dx (uniform points in the unit ball,
/// first k coordinates reflected into the orthant).
McEstimate ball_measure_mc(const MonomialCone& cone, std::int64_t samples, std::uint64_t seed);

/// sigma(x) = B_mu |x|^D
double sigma_map(const MonomialCone& cone, std::span<const double> x);

/// Monte Carlo estimate of mu({x in Sigma : a < sigma(x) < b}).
McEstimate sigma_preimage_measure_mc(const MonomialCone& cone, double a, double b,
                                     std::int64_t samples, std::uint64_t seed);

/// D * B_mu^{1/D}; the isoperimetric constant used when none is configured.
double default_c_iso(const MonomialCone& cone);

}  // namespace ri
