#include "maxpart/domain.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <sstream>

#include "maxpart/error.hpp"

namespace maxpart {

ProfileSet::ProfileSet(std::vector<unsigned> powers) : powers_(std::move(powers)) {
  if (powers_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "profile set is empty");
  }
  for (std::size_t i = 1; i < powers_.size(); ++i) {
    if (powers_[i] <= powers_[i - 1]) {
      throw Error(ErrorKind::InvalidArgument,
                  "profile set powers must be strictly increasing");
    }
  }
  if (powers_.back() == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "profile set must contain a positive power");
  }
}

std::optional<std::size_t> ProfileSet::index_of(unsigned j) const noexcept {
  auto it = std::lower_bound(powers_.begin(), powers_.end(), j);
  if (it == powers_.end() || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - powers_.begin());
}

std::string ProfileSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    if (i) os << ',';
    os << powers_[i];
  }
  os << '}';
  return os.str();
}

Profile::Profile(ProfileSet set, std::vector<BigInt> values)
    : set_(std::move(set)), values_(std::move(values)) {
  if (values_.size() != set_.size()) {
    throw Error(ErrorKind::InvalidArgument, "profile length does not match J");
  }
  for (const auto& v : values_) {
    if (v < 1) throw Error(ErrorKind::ZeroEntry, "profile entries must be >= 1");
  }
}

MomentVector::MomentVector(ProfileSet set, std::vector<double> values)
    : set_(std::move(set)), values_(std::move(values)) {
  if (values_.size() != set_.size()) {
    throw Error(ErrorKind::InvalidArgument, "moment vector length does not match J");
  }
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument, "moments must be finite and > 0");
    }
  }
}

Partition::Partition(Map multiplicities) {
  for (auto& [part, m] : multiplicities) {
    if (part == 0) throw Error(ErrorKind::InvalidArgument, "parts must be positive");
    if (m < 0) throw Error(ErrorKind::InvalidArgument, "negative multiplicity");
    if (m > 0) mult_.emplace(part, m);
  }
}

Partition Partition::from_parts(std::span<const std::uint64_t> parts) {
  Partition p;
  for (auto x : parts) p.add(x);
  return p;
}

void Partition::add(std::uint64_t part, const BigInt& multiplicity) {
  if (part == 0) throw Error(ErrorKind::InvalidArgument, "parts must be positive");
  if (multiplicity < 0) throw Error(ErrorKind::InvalidArgument, "negative multiplicity");
  if (multiplicity == 0) return;
  mult_[part] += multiplicity;
}

BigInt Partition::multiplicity(std::uint64_t part) const {
  auto it = mult_.find(part);
  return it == mult_.end() ? BigInt(0) : it->second;
}

BigInt Partition::length() const {
  BigInt total = 0;
  for (const auto& [part, m] : mult_) total += m;
  return total;
}

std::vector<std::uint64_t> Partition::parts_descending() const {
  std::vector<std::uint64_t> out;
  for (auto it = mult_.rbegin(); it != mult_.rend(); ++it) {
    const auto count = it->second.get_ui();
    out.insert(out.end(), count, it->first);
  }
  return out;
}

Partition operator+(const Partition& a, const Partition& b) {
  Partition out = a;
  for (const auto& [part, m] : b.mult_) out.add(part, m);
  return out;
}

BigInt power(std::uint64_t k, unsigned j) {
  BigInt base;
  mpz_import(base.get_mpz_t(), 1, 1, sizeof(k), 0, 0, &k);
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), j);
  return out;
}

std::vector<BigInt> profile_of(const Partition& lambda, const ProfileSet& set) {
  std::vector<BigInt> sums(set.size(), 0);
  for (const auto& [part, m] : lambda.multiplicities()) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      sums[i] += m * power(part, set[i]);
    }
  }
  return sums;
}

namespace {

// floor(alpha * n^{(j+1)/2}) with alpha taken as the exact rational its
// double encodes.
BigInt scaled_floor(double alpha, std::uint64_t n, unsigned j) {
  const mpq_class a(alpha);
  const BigInt nn = power(n, 1);
  BigInt whole;
  mpz_pow_ui(whole.get_mpz_t(), nn.get_mpz_t(), (j + 1) / 2);
  if ((j + 1) % 2 == 0) {
    mpq_class prod = a * mpq_class(whole);
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), prod.get_num_mpz_t(), prod.get_den_mpz_t());
    return out;
  }
  // Half-integer exponent: floor(a * w * sqrt(n)) = isqrt(floor(a^2 w^2 n)).
  mpq_class sq = a * a * mpq_class(whole * whole * nn);
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), sq.get_num_mpz_t(), sq.get_den_mpz_t());
  BigInt out;
  mpz_sqrt(out.get_mpz_t(), fl.get_mpz_t());
  return out;
}

}  // namespace

Profile scaled_profile(const MomentVector& alpha, std::uint64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  std::vector<BigInt> values;
  values.reserve(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    BigInt v = scaled_floor(alpha[i], n, alpha.set()[i]);
    if (v == 0) {
      throw Error(ErrorKind::ZeroEntry, "floor(alpha_j n^{(j+1)/2}) is 0 for j = " +
                                            std::to_string(alpha.set()[i]));
    }
    values.push_back(std::move(v));
  }
  return Profile(alpha.set(), std::move(values));
}

}  // namespace maxpart
