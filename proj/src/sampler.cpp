#include "maxpart/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <ostream>
#include <thread>

#include "maxpart/error.hpp"

namespace maxpart {

namespace {

// e^{-34.54} < 1e-15: beyond this a part is absent to double precision.
constexpr double kSkipLevel = 34.54;

// Sequence of p(k) for k = 1..last useful k, cached per dual.
std::vector<double> part_rates(const DiscreteDual& dual) {
  std::vector<double> rates;
  const std::uint64_t K = dual.truncation_K();
  std::uint64_t last = 0;
  for (std::uint64_t k = 1; k <= K; ++k) {
    const double p = dual.p(static_cast<double>(k));
    rates.push_back(p);
    if (p < kSkipLevel) last = k;
  }
  rates.resize(last);
  return rates;
}

std::uint64_t geometric(double rate, CounterRng& rng) {
  if (rate >= kSkipLevel) return 0;
  const double y = std::floor(rng.exponential() / rate);
  return y >= 0x1.0p63 ? std::uint64_t{1} << 63 : static_cast<std::uint64_t>(y);
}

std::vector<std::int64_t> small_profile(const Profile& N) {
  std::vector<std::int64_t> out;
  for (const auto& v : N.values()) {
    if (!v.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "profile entry too large");
    out.push_back(v.get_si());
  }
  return out;
}

// One draw from mu_n, abandoned as soon as some power sum overshoots N.
// Returns true iff the profile equals N; fills `lambda` in that case.
bool draw_matching(const std::vector<double>& rates, const ProfileSet& set,
                   const std::vector<std::int64_t>& target, CounterRng& rng,
                   Partition* lambda) {
  std::vector<std::int64_t> left = target;
  if (lambda) *lambda = Partition();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const std::uint64_t y = geometric(rates[i], rng);
    if (y == 0) continue;
    const std::uint64_t k = i + 1;
    for (std::size_t a = 0; a < set.size(); ++a) {
      __int128 contribution = y;
      for (unsigned e = 0; e < set[a] && contribution <= left[a]; ++e) contribution *= k;
      if (contribution > left[a]) return false;
      left[a] -= static_cast<std::int64_t>(contribution);
    }
    if (lambda) lambda->add(k, BigInt(static_cast<unsigned long>(y)));
  }
  return std::all_of(left.begin(), left.end(), [](std::int64_t v) { return v == 0; });
}

unsigned thread_count() {
  const char* env = std::getenv("MAXPART_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  return v >= 1 ? static_cast<unsigned>(std::min(v, 256L)) : 1U;
}

}  // namespace

Partition sample_mu(const DiscreteDual& dual, CounterRng& rng) {
  Partition lambda;
  const std::uint64_t K = dual.truncation_K();
  for (std::uint64_t k = 1; k <= K; ++k) {
    const std::uint64_t y = geometric(dual.p(static_cast<double>(k)), rng);
    if (y > 0) lambda.add(k, BigInt(static_cast<unsigned long>(y)));
  }
  return lambda;
}

UniformSample sample_uniform_exact(const Profile& N, const DiscreteDual& dual,
                                   CounterRng& rng, std::uint64_t max_tries) {
  if (!(N.set() == dual.set())) throw Error(ErrorKind::InvalidArgument, "J mismatch");
  const auto rates = part_rates(dual);
  const auto target = small_profile(N);
  UniformSample out;
  while (out.tries < max_tries) {
    ++out.tries;
    if (draw_matching(rates, N.set(), target, rng, &out.partition)) return out;
  }
  throw Error(ErrorKind::MaxTriesExceeded,
              "no draw with the requested profile in " + std::to_string(max_tries) + " tries");
}

std::vector<double> linear_grid(double a, double b, std::size_t m) {
  if (m < 2 || !(b > a)) throw Error(ErrorKind::InvalidArgument, "grid needs a < b and m >= 2");
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) {
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
  }
  g.back() = b;
  return g;
}

ShapeCurve limit_shape(const DualVector& beta, const std::vector<double>& grid) {
  require_positive(beta);
  const auto& p = beta.polynomial();
  const std::function<double(double)> f = [&](double s) { return bose(p(s)); };
  ShapeCurve out{grid, {}};
  const QuadratureOptions quad{1e-11, 1e-14, 2000};
  for (double t : grid) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid points must be > 0");
    out.values.push_back(integrate_from(f, t, quad));
  }
  return out;
}

ShapeCurve empirical_shape(const Partition& lambda, std::uint64_t n,
                           const std::vector<double>& grid) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const double root = std::sqrt(static_cast<double>(n));
  ShapeCurve out{grid, {}};
  for (double t : grid) {
    double count = 0.0;
    for (const auto& [part, mult] : lambda.multiplicities()) {
      if (static_cast<double>(part) >= t * root) count += mult.get_d();
    }
    out.values.push_back(count / root);
  }
  return out;
}

double shape_distance(const ShapeCurve& a, const ShapeCurve& b, double t1, double t2) {
  auto covers = [&](const ShapeCurve& c) {
    return !c.grid.empty() && c.grid.front() <= t1 && c.grid.back() >= t2;
  };
  if (!covers(a) || !covers(b)) {
    throw Error(ErrorKind::WindowUncovered, "curve grid does not cover the window");
  }
  double best = 0.0;
  bool shared = false;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    const double t = a.grid[i];
    if (t < t1 || t > t2) continue;
    while (j < b.grid.size() && b.grid[j] < t) ++j;
    if (j < b.grid.size() && b.grid[j] == t) {
      shared = true;
      best = std::max(best, std::abs(a.values[i] - b.values[j]));
    }
  }
  if (!shared) throw Error(ErrorKind::WindowUncovered, "no shared grid points in the window");
  return best;
}

void write_shape_csv(std::ostream& out, const ShapeCurve& curve) {
  out << "t,phi\n" << std::setprecision(12);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << curve.grid[i] << ',' << curve.values[i] << '\n';
  }
}

McEstimate mc_profile_probability(const DiscreteDual& dual, const Profile& N,
                                  std::uint64_t samples, const CounterRng& rng) {
  if (!(N.set() == dual.set())) throw Error(ErrorKind::InvalidArgument, "J mismatch");
  const auto rates = part_rates(dual);
  const auto target = small_profile(N);
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      CounterRng local = rng.substream(0x5A3C0000ULL + c);
      const std::uint64_t count = std::min(kChunk, samples - c * kChunk);
      for (std::uint64_t i = 0; i < count; ++i) {
        if (draw_matching(rates, N.set(), target, local, nullptr)) ++hits[c];
      }
    }
  };
  const unsigned threads = std::min<std::uint64_t>(thread_count(), std::max<std::uint64_t>(chunks, 1));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  McEstimate out;
  out.samples = samples;
  for (auto h : hits) out.hits += h;
  if (samples > 0) {
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
    out.standard_error =
        std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  }
  return out;
}

}  // namespace maxpart
