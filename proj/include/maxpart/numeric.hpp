#pragma once

// Numerical building blocks shared by the solvers: the geometric entropy,
// compensated summation, half-line quadrature and a counter-based RNG.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace maxpart {

/// G(eta) = (eta+1) log(eta+1) - eta log eta, the entropy of a geometric
/// variable with mean eta. G(0) = 0.
double geometric_entropy(double eta) noexcept;

/// sum_i c_i x^{powers_i}, evaluated by Horner on the dense expansion.
class PowerPolynomial {
 public:
  PowerPolynomial() = default;
  PowerPolynomial(std::span<const unsigned> powers, std::span<const double> coeffs);

  double operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = dense_.rbegin(); it != dense_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  /// First derivative.
  double derivative(double x) const noexcept;
  std::span<const double> dense() const noexcept { return dense_; }

 private:
  std::vector<double> dense_;
};

/// Bose factor 1/(e^p - 1) for p > 0.
inline double bose(double p) noexcept { return 1.0 / std::expm1(p); }

/// e^p / (e^p - 1)^2, the variance of a geometric with log-odds p.
inline double bose_variance(double p) noexcept {
  const double f = bose(p);
  return f * (1.0 + f);
}

/// -log(1 - e^{-p}), the per-mode log partition function.
inline double log_bose_partition(double p) noexcept {
  return -std::log(-std::expm1(-p));
}

/// G(1/(e^p - 1)) written through p so it stays accurate at both ends:
/// p f + (-log(1 - e^{-p})).
inline double bose_entropy(double p) noexcept {
  return p * bose(p) + log_bose_partition(p);
}

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
  std::size_t max_intervals = 2000;
};

/// Integral of f over (0, inf). [0,1] is mapped by x = v^4 (leaves a
/// log x endpoint term three times differentiable), [1,inf) by
/// x = 1 + u/(1-u); the pieces share one globally adaptive Gauss-Kronrod pool. Throws
/// QuadratureFailure when the error estimate misses the tolerance.
double integrate_half_line(const std::function<double(double)>& f,
                           const QuadratureOptions& opts = {});

/// Integral of f over (t, inf) for t > 0, with the same mapping idea:
/// [t, max(t,1)] under s = t + (1-t) v^2 when t < 1, then the tail map.
double integrate_from(const std::function<double(double)>& f, double t,
                      const QuadratureOptions& opts = {});

/// Adaptive Gauss-Kronrod on a finite interval.
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});

/// Counter-based 64-bit generator: the i-th output is a fixed mixing of
/// (key, i). Independent substreams come from distinct keys, so results do
/// not depend on how work is split between threads.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept;

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform_open_closed() noexcept;
  /// Standard exponential, -log U.
  double exponential() noexcept { return -std::log(uniform_open_closed()); }

  /// An independent stream derived from this generator's seed.
  CounterRng substream(std::uint64_t stream) const noexcept {
    return CounterRng(seed_, stream);
  }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace maxpart
