#include "maxpart/intpoly.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "maxpart/error.hpp"

namespace maxpart {

Rational IntValuedPoly::evaluate(const ProfileSet& set, const BigInt& m) const {
  Rational acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    BigInt mp;
    mpz_pow_ui(mp.get_mpz_t(), m.get_mpz_t(), set[i]);
    acc += coeffs[i] * mp;
  }
  acc.canonicalize();
  return acc;
}

bool IntValuedPoly::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
}

FeasibilityLattice::FeasibilityLattice(ProfileSet set, std::vector<IntValuedPoly> polys)
    : set_(std::move(set)), polys_(std::move(polys)), lcm_(1) {
  for (const auto& p : polys_) {
    if (p.coeffs.size() != set_.size()) {
      throw Error(ErrorKind::InvalidArgument, "polynomial does not match J");
    }
    for (const auto& c : p.coeffs) {
      mpz_lcm(lcm_.get_mpz_t(), lcm_.get_mpz_t(), c.get_den_mpz_t());
    }
  }
}

std::vector<std::vector<std::int64_t>> stirling_first_kind(unsigned d) {
  std::vector<std::vector<std::int64_t>> s(d + 1, std::vector<std::int64_t>(d + 1, 0));
  s[0][0] = 1;
  // x(x-1)...(x-i+1) = (x - (i-1)) * falling(i-1)
  for (unsigned i = 1; i <= d; ++i) {
    for (unsigned p = 1; p <= i; ++p) {
      s[i][p] = s[i - 1][p - 1] - static_cast<std::int64_t>(i - 1) * s[i - 1][p];
    }
  }
  return s;
}

namespace {

std::int64_t factorial(unsigned k) {
  std::int64_t f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

// Reduces x modulo den into (-den/2, den/2].
std::int64_t reduce_centered(std::int64_t x, std::int64_t den) {
  std::int64_t r = x % den;
  if (r < 0) r += den;
  if (2 * r > den) r -= den;
  return r;
}

}  // namespace

FeasibilityLattice enumerate_qj(const ProfileSet& set, const QjOptions& opts) {
  const unsigned d = set.j_max();
  if (d > opts.degree_cap) {
    throw Error(ErrorKind::DegreeCapExceeded,
                "j_max = " + std::to_string(d) + " exceeds cap " +
                    std::to_string(opts.degree_cap));
  }
  if (d > 20) {
    throw Error(ErrorKind::DegreeCapExceeded, "j_max > 20 overflows the residue arithmetic");
  }
  const auto stirling = stirling_first_kind(d);
  const std::int64_t den = factorial(d);
  std::vector<std::int64_t> fact(d + 1);
  for (unsigned i = 0; i <= d; ++i) fact[i] = factorial(i);

  // numer[p] accumulates den * (coefficient of x^p); coefficient p only
  // receives contributions from binom(x, i) with i >= p.
  std::vector<std::int64_t> numer(d + 1, 0);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<IntValuedPoly> out;

  std::function<void(unsigned)> descend = [&](unsigned i) {
    if (i == 0) {
      std::vector<std::int64_t> key;
      key.reserve(set.size());
      for (unsigned j : set.powers()) key.push_back(reduce_centered(numer[j], den));
      if (!seen.insert(key).second) return;
      if (seen.size() > opts.max_size) {
        throw Error(ErrorKind::EnumerationCapExceeded,
                    "Q_J has more than " + std::to_string(opts.max_size) + " elements");
      }
      IntValuedPoly poly;
      poly.coeffs.reserve(key.size());
      for (auto k : key) {
        Rational c(k, den);
        c.canonicalize();
        poly.coeffs.push_back(c);
      }
      out.push_back(std::move(poly));
      return;
    }
    const std::int64_t scale = den / fact[i];
    for (std::int64_t s = 0; s < fact[i]; ++s) {
      for (unsigned p = 0; p <= i; ++p) numer[p] += s * stirling[i][p] * scale;
      // After fixing s_i the coefficient of x^i is final.
      const bool ok = set.contains(i) || numer[i] % den == 0;
      if (ok) descend(i - 1);
      for (unsigned p = 0; p <= i; ++p) numer[p] -= s * stirling[i][p] * scale;
    }
  };
  descend(d);

  // Zero polynomial first, then lexicographic by reduced numerators.
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = out[a].coeffs;
    const auto& cb = out[b].coeffs;
    if (out[a].is_zero() != out[b].is_zero()) return out[a].is_zero();
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  });
  std::vector<IntValuedPoly> sorted;
  sorted.reserve(out.size());
  for (auto i : order) sorted.push_back(std::move(out[i]));
  return FeasibilityLattice(set, std::move(sorted));
}

bool is_n_feasible(std::span<const BigInt> values, const FeasibilityLattice& lattice) {
  if (values.size() != lattice.set().size()) {
    throw Error(ErrorKind::InvalidArgument, "profile does not match lattice J");
  }
  for (const auto& poly : lattice.polys()) {
    Rational acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += poly.coeffs[i] * values[i];
    acc.canonicalize();
    if (acc.get_den() != 1) return false;
  }
  return true;
}

bool is_n_feasible(const Profile& profile, const FeasibilityLattice& lattice) {
  if (!(profile.set() == lattice.set())) {
    throw Error(ErrorKind::InvalidArgument, "profile and lattice use different J");
  }
  return is_n_feasible(profile.values(), lattice);
}

Rational nt_density(const FeasibilityLattice& lattice, std::uint64_t box_side,
                    std::uint64_t cap) {
  if (box_side == 0) throw Error(ErrorKind::InvalidArgument, "box side must be positive");
  const std::size_t dim = lattice.set().size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (total > cap / box_side) {
      throw Error(ErrorKind::BoxCapExceeded, "box_side^|J| exceeds cap");
    }
    total *= box_side;
  }
  if (total > cap) throw Error(ErrorKind::BoxCapExceeded, "box_side^|J| exceeds cap");

  // Integer form: poly q passes at N iff sum_j (L t_j) N_j == 0 mod L.
  if (!lattice.denominator_lcm().fits_slong_p()) {
    throw Error(ErrorKind::InvalidArgument, "denominator lcm too large");
  }
  const std::int64_t L = lattice.denominator_lcm().get_si();
  std::vector<std::vector<std::int64_t>> weights;
  for (const auto& poly : lattice.polys()) {
    std::vector<std::int64_t> w;
    for (const auto& c : poly.coeffs) {
      Rational scaled = c * L;
      scaled.canonicalize();
      std::int64_t v = scaled.get_num().get_si() % L;
      if (v < 0) v += L;
      w.push_back(v);
    }
    weights.push_back(std::move(w));
  }

  std::vector<std::uint64_t> point(dim, 0);
  std::uint64_t passing = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    bool ok = true;
    for (const auto& w : weights) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        acc = (acc + w[i] * static_cast<std::int64_t>(point[i] % L)) % L;
      }
      if (acc != 0) {
        ok = false;
        break;
      }
    }
    if (ok) ++passing;
    for (std::size_t i = 0; i < dim; ++i) {
      if (++point[i] < box_side) break;
      point[i] = 0;
    }
  }
  Rational density(static_cast<unsigned long>(passing), static_cast<unsigned long>(total));
  density.canonicalize();
  return density;
}

}  // namespace maxpart
