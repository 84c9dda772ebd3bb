#include "maxpart/exact_count.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "maxpart/error.hpp"

namespace maxpart {

namespace {

using Residual = std::vector<std::int64_t>;

struct ResidualHash {
  std::size_t operator()(const Residual& r) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (auto v : r) h = mix(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

constexpr std::int64_t kLimit = std::int64_t{1} << 62;

// x^e saturated at kLimit.
std::int64_t sat_pow(std::int64_t x, unsigned e) {
  __int128 acc = 1;
  for (unsigned i = 0; i < e; ++i) {
    acc *= x;
    if (acc >= kLimit) return kLimit;
  }
  return static_cast<std::int64_t>(acc);
}

struct Shape {
  std::vector<unsigned> powers;

  // Can parts of size at most y realize r exactly (up to the necessary
  // conditions r_j <= r_j' <= y^{j'-j} r_j)?
  bool viable(const Residual& r, std::int64_t y) const {
    bool zero = true;
    for (auto v : r) zero = zero && v == 0;
    if (zero) return true;
    if (y <= 0) return false;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      if (r[i] > r[i + 1]) return false;
      const __int128 cap = static_cast<__int128>(sat_pow(y, powers[i + 1] - powers[i])) * r[i];
      if (r[i + 1] > cap) return false;
    }
    return r.front() > 0;
  }

  Residual part_vector(std::int64_t x) const {
    Residual v;
    for (unsigned j : powers) v.push_back(sat_pow(x, j));
    return v;
  }
};

Residual to_residual(std::span<const BigInt> values) {
  Residual r;
  for (const auto& v : values) {
    if (v < 0) throw Error(ErrorKind::InvalidArgument, "profile entries must be >= 0");
    if (!v.fits_slong_p() || v >= BigInt(static_cast<double>(kLimit))) {
      throw Error(ErrorKind::InvalidArgument, "profile entry too large for exact counting");
    }
    r.push_back(v.get_si());
  }
  return r;
}

// Largest part that can occur: min over positive j of floor(N_j^{1/j}).
std::int64_t largest_part(const ProfileSet& set, std::span<const BigInt> values) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] == 0) continue;
    BigInt root;
    mpz_root(root.get_mpz_t(), values[i].get_mpz_t(), set[i]);
    best = std::min(best, static_cast<std::int64_t>(root.get_si()));
  }
  return best;
}

}  // namespace

const BigInt& CountTable::at(std::span<const std::uint64_t> u) const {
  static const BigInt zero = 0;
  if (u.size() != bounds_.size()) throw Error(ErrorKind::InvalidArgument, "wrong dimension");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] > bounds_[i]) return zero;
    idx += u[i] * strides_[i];
  }
  return counts_[idx];
}

CountTable build_count_table(const ProfileSet& set, std::vector<std::uint64_t> bounds,
                             std::uint64_t memory_cap) {
  if (bounds.size() != set.size()) throw Error(ErrorKind::InvalidArgument, "wrong dimension");
  CountTable t;
  t.set_ = set;
  t.bounds_ = std::move(bounds);
  const std::size_t d = set.size();
  t.strides_.assign(d, 1);
  __int128 cells = 1;
  for (std::size_t i = d; i-- > 0;) {
    t.strides_[i] = static_cast<std::uint64_t>(cells);
    cells *= static_cast<__int128>(t.bounds_[i]) + 1;
    if (cells > static_cast<__int128>(memory_cap)) {
      std::ostringstream os;
      os << "count table needs more than " << memory_cap << " cells";
      throw Error(ErrorKind::MemoryCapExceeded, os.str());
    }
  }
  t.counts_.assign(static_cast<std::size_t>(cells), BigInt(0));
  t.counts_[0] = 1;

  std::vector<BigInt> b;
  for (auto v : t.bounds_) b.emplace_back(static_cast<unsigned long>(v));
  const std::int64_t xmax = largest_part(set, b);
  std::vector<std::uint64_t> u(d);
  for (std::int64_t x = 1; x <= xmax; ++x) {
    std::vector<std::uint64_t> v;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < d; ++i) {
      v.push_back(static_cast<std::uint64_t>(sat_pow(x, set[i])));
      offset += v[i] * t.strides_[i];
    }
    // Ascending flat order visits u - v before u, so parts of size x can
    // repeat (unbounded knapsack).
    std::fill(u.begin(), u.end(), 0);
    for (std::size_t idx = 0; idx < t.counts_.size(); ++idx) {
      bool fits = true;
      for (std::size_t i = 0; i < d && fits; ++i) fits = u[i] >= v[i];
      if (fits) t.counts_[idx] += t.counts_[idx - offset];
      for (std::size_t i = d; i-- > 0;) {
        if (++u[i] <= t.bounds_[i]) break;
        u[i] = 0;
      }
    }
    t.parts_processed_ = static_cast<std::uint64_t>(x);
  }
  return t;
}

BigInt count_exact(const ProfileSet& set, std::span<const BigInt> values,
                   std::uint64_t memory_cap) {
  if (values.size() != set.size()) throw Error(ErrorKind::InvalidArgument, "wrong dimension");
  const Residual start = to_residual(values);
  const Shape shape{{set.powers().begin(), set.powers().end()}};
  const std::int64_t xmax = largest_part(set, values);
  if (!shape.viable(start, xmax)) return 0;

  std::unordered_map<Residual, BigInt, ResidualHash> frontier{{start, BigInt(1)}};
  for (std::int64_t x = xmax; x >= 1; --x) {
    const Residual v = shape.part_vector(x);
    std::unordered_map<Residual, BigInt, ResidualHash> next;
    for (const auto& [r, count] : frontier) {
      Residual cur = r;
      while (true) {
        if (shape.viable(cur, x - 1)) {
          next[cur] += count;
          if (next.size() > memory_cap) {
            std::ostringstream os;
            os << "more than " << memory_cap << " reachable residual profiles at part " << x;
            throw Error(ErrorKind::MemoryCapExceeded, os.str());
          }
        }
        bool ok = true;
        for (std::size_t i = 0; i < cur.size(); ++i) {
          cur[i] -= v[i];
          ok = ok && cur[i] >= 0;
        }
        if (!ok) break;
      }
    }
    frontier = std::move(next);
  }
  const auto it = frontier.find(Residual(start.size(), 0));
  return it == frontier.end() ? BigInt(0) : it->second;
}

BigInt count_exact(const Profile& N, std::uint64_t memory_cap) {
  return count_exact(N.set(), N.values(), memory_cap);
}

BigInt count_pn(std::uint64_t n) {
  std::vector<BigInt> p(n + 1);
  p[0] = 1;
  for (std::uint64_t m = 1; m <= n; ++m) {
    BigInt acc = 0;
    for (std::uint64_t k = 1;; ++k) {
      const std::uint64_t g1 = k * (3 * k - 1) / 2;
      if (g1 > m) break;
      const std::uint64_t g2 = k * (3 * k + 1) / 2;
      const bool plus = k % 2 == 1;
      BigInt term = p[m - g1];
      if (g2 <= m) term += p[m - g2];
      if (plus) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    p[m] = acc;
  }
  return p[n];
}

std::vector<Partition> enumerate_profile_partitions(const Profile& N, std::uint64_t cap) {
  const auto& set = N.set();
  const Shape shape{{set.powers().begin(), set.powers().end()}};
  const Residual start = to_residual(N.values());
  std::vector<Partition> out;
  Partition current;

  // Depth-first over part values from the largest down.
  auto dfs = [&](auto& self, const Residual& r, std::int64_t x) -> void {
    bool zero = true;
    for (auto v : r) zero = zero && v == 0;
    if (zero) {
      if (out.size() >= cap) {
        std::ostringstream os;
        os << "more than " << cap << " partitions";
        throw Error(ErrorKind::CapExceeded, os.str());
      }
      out.push_back(current);
      return;
    }
    if (x == 0) return;
    const Residual v = shape.part_vector(x);
    Residual cur = r;
    for (std::uint64_t m = 0;; ++m) {
      if (shape.viable(cur, x - 1)) {
        Partition saved = current;
        if (m > 0) current.add(static_cast<std::uint64_t>(x), BigInt(static_cast<unsigned long>(m)));
        self(self, cur, x - 1);
        current = std::move(saved);
      }
      bool ok = true;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        cur[i] -= v[i];
        ok = ok && cur[i] >= 0;
      }
      if (!ok) break;
    }
  };
  const std::int64_t xmax = largest_part(set, N.values());
  if (shape.viable(start, xmax)) dfs(dfs, start, xmax);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace maxpart
