#include "sumprod/oracle.hpp"

#include <random>

#include "sumprod/errors.hpp"

namespace sumprod::oracle {

namespace {

Scalar apply(const Scalar& x, const Scalar& y, Op op) {
  switch (op) {
    case Op::add: return x + y;
    case Op::sub: return x - y;
    case Op::mul: return x * y;
    case Op::div: return x / y;
  }
  return {};
}

}  // namespace

std::uint64_t energy(const FiniteSet& a, const FiniteSet& b, EnergyKind kind) {
  const bool mul = kind == EnergyKind::multiplicative;
  if (mul && (a.contains_zero() || b.contains_zero())) throw DomainError("zero element in multiplicative energy");
  std::uint64_t e = 0;
  for (const auto& a1 : a) {
    for (const auto& b1 : b) {
      const Scalar l = mul ? a1 * b1 : a1 + b1;
      for (const auto& a2 : a) {
        for (const auto& b2 : b) {
          if (l == (mul ? a2 * b2 : a2 + b2)) ++e;
        }
      }
    }
  }
  return e;
}

std::map<Scalar, std::uint64_t> rep_counts(const FiniteSet& a, const FiniteSet& b, Op op) {
  std::map<Scalar, std::uint64_t> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (op == Op::div && y.is_zero()) continue;
      ++out[apply(x, y, op)];
    }
  }
  return out;
}

std::map<Scalar, std::uint64_t> spectrum(const FiniteSet& a) {
  std::map<Scalar, std::uint64_t> out;
  for (const auto& x : a) {
    for (const auto& y : a) {
      const Scalar lambda = x / y;
      if (out.contains(lambda)) continue;
      std::uint64_t size = 0;
      for (const auto& z : a) {
        if (a.contains(z / lambda)) ++size;
      }
      out[lambda] = size;
    }
  }
  return out;
}

BigInt collinear_triples(const PointSet& p) {
  BigInt t = 0;
  const auto pts = p.points();
  for (const auto& u : pts) {
    for (const auto& v : pts) {
      for (const auto& w : pts) {
        if ((v.x - u.x) * (w.y - u.y) == (w.x - u.x) * (v.y - u.y)) ++t;
      }
    }
  }
  return t;
}

std::uint64_t sigma_count(const Scalar& alpha1, const FiniteSet& a1, const Scalar& alpha2, const FiniteSet& a2,
                          const Scalar& alpha3, const FiniteSet& a3) {
  std::uint64_t c = 0;
  for (const auto& x : a1) {
    for (const auto& y : a2) {
      for (const auto& z : a3) {
        if ((alpha1 * x + alpha2 * y + alpha3 * z).is_zero()) ++c;
      }
    }
  }
  return c;
}

SigmaResult sigma_max_sample(const FiniteSet& a1, const FiniteSet& a2, const FiniteSet& a3, std::uint64_t seed,
                             std::size_t samples) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 6);
  auto nonzero = [&] {
    long n = 0;
    while (n == 0) n = num(rng);
    return Scalar::fraction(n, den(rng));
  };
  auto pick = [&](const FiniteSet& s) { return s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)]; };
  SigmaResult best{0, Scalar(1), Scalar(1), Scalar(1), false};
  for (std::size_t i = 0; i < samples; ++i) {
    const Scalar alpha2 = nonzero();
    Scalar alpha3 = nonzero();
    if (i % 2 == 1) {
      const Scalar x = pick(a1), y = pick(a2), z = pick(a3);
      if (z.is_zero()) continue;
      alpha3 = -(x + alpha2 * y) / z;
      if (alpha3.is_zero()) continue;
    }
    const std::uint64_t c = oracle::sigma_count(Scalar(1), a1, alpha2, a2, alpha3, a3);
    if (c > best.count) best = {c, Scalar(1), alpha2, alpha3, false};
  }
  return best;
}

}  // namespace sumprod::oracle
