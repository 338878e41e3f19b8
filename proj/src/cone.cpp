#include "ri/cone.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ri/error.hpp"

namespace ri {

namespace {

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

// Uniform samples in the ball of radius R, reflected into the orthant; returns the
// mean and standard error of g(x) scaled by vol(B_R) 2^{-k}.
template <class G>
McEstimate sample_ball(const MonomialCone& cone, double R, std::int64_t samples,
                       std::uint64_t seed, G&& g) {
  if (samples < 2) throw DomainError("monte carlo: need at least 2 samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  const int n = cone.n();
  std::vector<double> x(n);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = normal(rng);
      norm2 += x[i] * x[i];
    }
    const double r = R * std::pow(unif(rng), 1.0 / n) / std::sqrt(norm2);
    for (int i = 0; i < n; ++i) x[i] = (i < cone.k() ? std::abs(x[i]) : x[i]) * r;
    const double v = g(std::span<const double>(x));
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  const double scale = unit_ball_volume(n) * std::pow(R, n) * std::ldexp(1.0, -cone.k());
  const double var = m2 / static_cast<double>(samples - 1);
  return {scale * mean, scale * std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace

MonomialCone::MonomialCone(int n, int k, std::vector<double> A) : n_(n), k_(k), A_(std::move(A)) {
  if (n_ < 2) throw DomainError("MonomialCone: n must be >= 2");
  if (k_ < 1 || k_ > n_) throw DomainError("MonomialCone: need 1 <= k <= n");
  if (static_cast<int>(A_.size()) != k_) throw DomainError("MonomialCone: A must have k entries");
  alpha_ = 0.0;
  for (double a : A_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("MonomialCone: exponents must be positive");
    alpha_ += a;
  }
  D_ = n_ + alpha_;
  B_mu_ = ball_measure(*this);
}

double weight_eval(const MonomialCone& cone, std::span<const double> x) {
  if (static_cast<int>(x.size()) != cone.n()) throw DomainError("weight_eval: wrong dimension");
  double w = 1.0;
  for (int i = 0; i < cone.k(); ++i) {
    if (x[i] < 0.0) throw DomainError("weight_eval: point outside the closed cone");
    w *= std::pow(x[i], cone.A()[i]);
  }
  return w;
}

double ball_measure(const MonomialCone& cone) {
  double lg = 0.0;
  for (double a : cone.A()) lg += std::lgamma((a + 1.0) / 2.0);
  lg += 0.5 * (cone.n() - cone.k()) * std::log(std::numbers::pi);
  lg -= cone.k() * std::log(2.0);
  lg -= std::lgamma(cone.D() / 2.0 + 1.0);
  return std::exp(lg);
}

McEstimate ball_measure_mc(const MonomialCone& cone, std::int64_t samples, std::uint64_t seed) {
  return sample_ball(cone, 1.0, samples, seed,
                     [&](std::span<const double> x) { return weight_eval(cone, x); });
}

double sigma_map(const MonomialCone& cone, std::span<const double> x) {
  if (static_cast<int>(x.size()) != cone.n()) throw DomainError("sigma_map: wrong dimension");
  double r2 = 0.0;
  for (int i = 0; i < cone.n(); ++i) {
    if (i < cone.k() && x[i] < 0.0) throw DomainError("sigma_map: point outside the closed cone");
    r2 += x[i] * x[i];
  }
  return cone.B_mu() * std::pow(r2, cone.D() / 2.0);
}

McEstimate sigma_preimage_measure_mc(const MonomialCone& cone, double a, double b,
                                     std::int64_t samples, std::uint64_t seed) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw DomainError("sigma_preimage_measure_mc: need 0 <= a < b < inf");
  }
  const double R = std::pow(b / cone.B_mu(), 1.0 / cone.D());
  return sample_ball(cone, R, samples, seed, [&](std::span<const double> x) {
    const double s = sigma_map(cone, x);
    return (s > a && s < b) ? weight_eval(cone, x) : 0.0;
  });
}

double default_c_iso(const MonomialCone& cone) {
  return cone.D() * std::pow(cone.B_mu(), 1.0 / cone.D());
}

}  // namespace ri
