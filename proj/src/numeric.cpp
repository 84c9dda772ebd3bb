#include "maxpart/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>
#include <sstream>

#include "maxpart/error.hpp"

namespace maxpart {

PowerPolynomial::PowerPolynomial(std::span<const unsigned> powers,
                                 std::span<const double> coeffs) {
  unsigned top = 0;
  for (auto j : powers) top = std::max(top, j);
  dense_.assign(top + 1, 0.0);
  for (std::size_t i = 0; i < powers.size(); ++i) dense_[powers[i]] += coeffs[i];
}

double PowerPolynomial::derivative(double x) const noexcept {
  double acc = 0.0;
  for (std::size_t i = dense_.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * dense_[i];
  return acc;
}

double geometric_entropy(double eta) noexcept {
  if (eta <= 0.0) return 0.0;
  return (eta + 1.0) * std::log1p(eta) - eta * std::log(eta);
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Interval {
  double a, b, value, error, l1;
  std::size_t piece;
  bool operator<(const Interval& o) const { return error < o.error; }
};

// Globally adaptive: keep bisecting the interval with the largest
// error estimate until the summed estimate meets the tolerance. The
// pieces are integrated jointly so the tolerance applies to their sum.
class Adaptive {
 public:
  explicit Adaptive(const QuadratureOptions& opts) : opts_(opts) {}

  void add(std::function<double(double)> f, double a, double b) {
    fns_.push_back(std::move(f));
    push(fns_.size() - 1, a, b);
  }

  double run() {
    while (true) {
      double value = 0.0, error = 0.0, l1 = 0.0;
      for (const auto& iv : heap_) {
        value += iv.value;
        error += iv.error;
        l1 += iv.l1;
      }
      if (!std::isfinite(value)) {
        throw Error(ErrorKind::QuadratureFailure, "non-finite integral");
      }
      const double allowed = std::max(opts_.rel_tol * l1, opts_.abs_floor);
      if (error <= allowed) return value;
      if (heap_.size() >= opts_.max_intervals) {
        std::ostringstream os;
        os << "error estimate " << error << " exceeds " << allowed;
        throw Error(ErrorKind::QuadratureFailure, os.str());
      }
      std::pop_heap(heap_.begin(), heap_.end());
      const Interval worst = heap_.back();
      heap_.pop_back();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) {
        throw Error(ErrorKind::QuadratureFailure, "interval underflow");
      }
      push(worst.piece, worst.a, mid);
      push(worst.piece, mid, worst.b);
    }
  }

 private:
  void push(std::size_t piece, double a, double b) {
    double error = 0.0, l1 = 0.0;
    const double value = Kronrod::integrate(fns_[piece], a, b, 0, 0.0, &error, &l1);
    heap_.push_back({a, b, value, error, l1, piece});
    std::push_heap(heap_.begin(), heap_.end());
  }

  QuadratureOptions opts_;
  std::vector<std::function<double(double)>> fns_;
  std::vector<Interval> heap_;
};

// Integrand on [0,1) for the part of (start, inf) mapped by
// x = start + u/(1-u), dx = du/(1-u)^2.
std::function<double(double)> tail_map(const std::function<double(double)>& f,
                                       double start) {
  return [&f, start](double u) {
    if (u >= 1.0) return 0.0;
    const double w = 1.0 - u;
    const double v = f(start + u / w);
    if (v == 0.0) return 0.0;
    return v / (w * w);
  };
}

}  // namespace

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts) {
  Adaptive q(opts);
  q.add(f, a, b);
  return q.run();
}

double integrate_half_line(const std::function<double(double)>& f,
                           const QuadratureOptions& opts) {
  Adaptive q(opts);
  q.add(
      [&f](double v) {
        const double v2 = v * v;
        const double x = v2 * v2;
        if (x <= 0.0) return 0.0;
        return 4.0 * v2 * v * f(x);
      },
      0.0, 1.0);
  q.add(tail_map(f, 1.0), 0.0, 1.0);
  return q.run();
}

double integrate_from(const std::function<double(double)>& f, double t,
                      const QuadratureOptions& opts) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "lower limit must be > 0");
  Adaptive q(opts);
  if (t < 1.0) {
    const double span = 1.0 - t;
    q.add([&f, t, span](double v) { return 2.0 * span * v * f(t + span * v * v); }, 0.0,
          1.0);
  }
  q.add(tail_map(f, std::max(t, 1.0)), 0.0, 1.0);
  return q.run();
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

CounterRng::result_type CounterRng::operator()() noexcept {
  const std::uint64_t c = counter_++;
  return mix64(key_ + (c + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform_open_closed() noexcept {
  return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace maxpart
