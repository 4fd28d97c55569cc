#include "sumprod/counting.hpp"

#include <algorithm>
#include <array>
#include <tuple>

#include "detail/kernels.hpp"
#include "sumprod/errors.hpp"

namespace sumprod {

using detail::i128;

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Exact lattice image of a single set: a = n / d.
struct Image1 {
  std::vector<std::int64_t> n;
  BigInt d;
};

std::optional<Image1> image_of(const FiniteSet& a, unsigned max_bits) {
  auto img = detail::integer_image(a, max_bits);
  if (!img) return std::nullopt;
  return Image1{std::move(img->sets[0]), img->denominator};
}

// Coefficients scaled to integers: c_i = alpha_i * L.
std::optional<std::array<std::int64_t, 3>> integer_coefficients(const Scalar& a1, const Scalar& a2, const Scalar& a3) {
  BigInt l = 1;
  for (const Scalar* s : {&a1, &a2, &a3}) {
    const BigInt den = s->denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  std::array<std::int64_t, 3> out{};
  std::size_t i = 0;
  for (const Scalar* s : {&a1, &a2, &a3}) {
    const BigInt c = s->numerator() * (l / s->denominator());
    if (mpz_sizeinbase(c.get_mpz_t(), 2) > 60) return std::nullopt;
    out[i++] = c.get_si();
  }
  return out;
}

}  // namespace

SigmaResult sigma_count(const Scalar& alpha1, const FiniteSet& a1, const Scalar& alpha2, const FiniteSet& a2,
                        const Scalar& alpha3, const FiniteSet& a3) {
  if (alpha1.is_zero() || alpha2.is_zero() || alpha3.is_zero()) throw DomainError("zero coefficient");
  SigmaResult r{0, alpha1, alpha2, alpha3, false};
  const FiniteSet* sets[] = {&a1, &a2, &a3};
  auto img = detail::integer_image(sets, 40);
  auto coef = integer_coefficients(alpha1, alpha2, alpha3);
  if (img && coef) {
    const auto& n1 = img->sets[0];
    const auto& n2 = img->sets[1];
    const auto& n3 = img->sets[2];
    const i128 c1 = (*coef)[0], c2 = (*coef)[1], c3 = (*coef)[2];
    for (auto x : n1) {
      const i128 base = c1 * x;
      for (auto y : n2) {
        const i128 s = base + c2 * y;
        if (s % c3 != 0) continue;
        const i128 v = -s / c3;
        if (v > INT64_MAX || v < INT64_MIN) continue;
        if (std::binary_search(n3.begin(), n3.end(), static_cast<std::int64_t>(v))) ++r.count;
      }
    }
    return r;
  }
  const Scalar inv3 = -alpha3.inverse();
  for (const auto& x : a1) {
    const Scalar base = alpha1 * x;
    for (const auto& y : a2) {
      if (a3.contains((base + alpha2 * y) * inv3)) ++r.count;
    }
  }
  return r;
}

namespace {

// a x + b y + c = 0, primitive, first nonzero of (a, b) positive.
struct Line {
  std::int64_t a, b, c;
  friend auto operator<=>(const Line&, const Line&) = default;
};

struct PlanePoint {
  i128 xn, xd, yn, yd;
  friend auto operator<=>(const PlanePoint&, const PlanePoint&) = default;
};

Scalar to_scalar_fraction(i128 n, i128 d) { return Scalar::fraction(detail::to_scalar(n).numerator(), detail::to_scalar(d).numerator()); }

std::optional<PlanePoint> intersect_lines(const Line& l1, const Line& l2) {
  const i128 det = static_cast<i128>(l1.a) * l2.b - static_cast<i128>(l2.a) * l1.b;
  if (det == 0) return std::nullopt;
  i128 xn = -static_cast<i128>(l1.c) * l2.b + static_cast<i128>(l2.c) * l1.b;
  i128 yn = -static_cast<i128>(l1.a) * l2.c + static_cast<i128>(l2.a) * l1.c;
  if (xn == 0 || yn == 0) return std::nullopt;
  i128 xd = det, yd = det;
  if (xd < 0) {
    xn = -xn;
    xd = -xd;
  }
  if (yd < 0) {
    yn = -yn;
    yd = -yd;
  }
  const i128 gx = gcd128(xn, xd);
  const i128 gy = gcd128(yn, yd);
  return PlanePoint{xn / gx, xd / gx, yn / gy, yd / gy};
}

bool lex_less(const std::pair<Scalar, Scalar>& p, const std::pair<Scalar, Scalar>& q) {
  if (p.first != q.first) return p.first < q.first;
  return p.second < q.second;
}

}  // namespace

SigmaResult sigma_max(const FiniteSet& a1, const FiniteSet& a2, const FiniteSet& a3) {
  const std::uint64_t triples = static_cast<std::uint64_t>(a1.size()) * a2.size() * a3.size();
  if (triples > kSigmaMaxTriples) throw ResourceError("sigma_max input exceeds " + std::to_string(kSigmaMaxTriples) + " triples");
  auto i1 = image_of(a1, 40);
  auto i2 = image_of(a2, 40);
  auto i3 = image_of(a3, 40);
  if (!i1 || !i2 || !i3) throw ResourceError("sigma_max elements too large for the lattice kernel");

  // With alpha1 = 1 and a_i = n_i / d_i, substitute alpha2 = beta2 d2/d1, alpha3 = beta3 d3/d1:
  // each triple becomes the line n2 beta2 + n3 beta3 + n1 = 0.
  std::uint64_t always = 0;
  std::vector<Line> raw;
  raw.reserve(triples);
  for (auto n1 : i1->n) {
    for (auto n2 : i2->n) {
      for (auto n3 : i3->n) {
        if (n2 == 0 && n3 == 0) {
          if (n1 == 0) ++always;
          continue;
        }
        std::int64_t g = std::gcd(std::gcd(n2, n3), n1);
        Line l{n2 / g, n3 / g, n1 / g};
        if (l.a < 0 || (l.a == 0 && l.b < 0)) l = {-l.a, -l.b, -l.c};
        raw.push_back(l);
      }
    }
  }
  const auto lines = detail::tally(raw);
  const std::size_t nl = lines.size();
  if (static_cast<double>(nl) * static_cast<double>(nl) > 4e9) throw ResourceError("sigma_max candidate systems exceed budget");

  std::uint64_t best = always;
  std::optional<std::pair<Scalar, Scalar>> best_point;
  bool best_pair = false;
  auto offer = [&](std::uint64_t count, std::pair<Scalar, Scalar> beta, bool pair) {
    if (count > best || !best_point || (count == best && lex_less(beta, *best_point))) {
      best = count;
      best_point = std::move(beta);
      best_pair = pair;
    }
  };

  std::vector<std::pair<PlanePoint, std::uint64_t>> pts;
  for (std::size_t i = 0; i < nl; ++i) {
    const Line& li = lines[i].first;
    const std::uint64_t wi = lines[i].second;
    // Generic point of the line alone, avoiding the axes.
    if (li.b != 0) {
      for (std::int64_t x : {1, 2}) {
        const Scalar y = Scalar::fraction(BigInt(-(li.c + li.a * x)), BigInt(li.b));
        if (!y.is_zero()) {
          if (always + wi >= best) offer(always + wi, {Scalar(x), y}, false);
          break;
        }
      }
    } else if (li.c != 0) {
      if (always + wi >= best) offer(always + wi, {Scalar::fraction(BigInt(-li.c), BigInt(li.a)), Scalar(1)}, false);
    }
    pts.clear();
    for (std::size_t j = i + 1; j < nl; ++j) {
      if (auto p = intersect_lines(li, lines[j].first)) pts.emplace_back(*p, lines[j].second);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    for (std::size_t s = 0; s < pts.size();) {
      std::size_t e = s;
      std::uint64_t c = always + wi;
      while (e < pts.size() && pts[e].first == pts[s].first) c += pts[e++].second;
      if (c >= best) {
        const auto& p = pts[s].first;
        offer(c, {to_scalar_fraction(p.xn, p.xd), to_scalar_fraction(p.yn, p.yd)}, true);
      }
      s = e;
    }
  }

  SigmaResult r;
  r.count = best;
  r.alpha1 = Scalar(1);
  const auto beta = best_point.value_or(std::pair<Scalar, Scalar>{Scalar(1), Scalar(1)});
  r.alpha2 = beta.first * Scalar(i2->d) / Scalar(i1->d);
  r.alpha3 = beta.second * Scalar(i3->d) / Scalar(i1->d);
  r.from_pair_system = best_pair;
  return r;
}

namespace {

// Coordinates on a common lattice per axis; collinearity is invariant under
// independent positive scaling of the axes.
std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> lattice_points(const PointSet& p) {
  BigInt dx = 1, dy = 1;
  for (const auto& q : p.points()) {
    const BigInt ex = q.x.denominator();
    const BigInt ey = q.y.denominator();
    mpz_lcm(dx.get_mpz_t(), dx.get_mpz_t(), ex.get_mpz_t());
    mpz_lcm(dy.get_mpz_t(), dy.get_mpz_t(), ey.get_mpz_t());
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(p.size());
  for (const auto& q : p.points()) {
    const BigInt x = q.x.numerator() * (dx / q.x.denominator());
    const BigInt y = q.y.numerator() * (dy / q.y.denominator());
    if (mpz_sizeinbase(x.get_mpz_t(), 2) > 61 || mpz_sizeinbase(y.get_mpz_t(), 2) > 61) return std::nullopt;
    out.emplace_back(x.get_si(), y.get_si());
  }
  return out;
}

BigInt cube_part(std::uint64_t n) {
  const BigInt b(static_cast<unsigned long>(n));
  return b * b * b - b * (b - 1) * (b - 2);
}

}  // namespace

BigInt collinear_triples(const PointSet& p) {
  const std::size_t n = p.size();
  // Ordered triples with a repeated point always count; each line with m
  // points adds m(m-1)(m-2) ordered triples of distinct points, accumulated
  // per anchor as c(c-1) over the other points sharing a direction.
  BigInt distinct_on_lines = 0;
  if (auto pts = lattice_points(p)) {
    std::vector<std::pair<std::int64_t, std::int64_t>> dirs;
    for (std::size_t i = 0; i < n; ++i) {
      dirs.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        std::int64_t ddx = (*pts)[j].first - (*pts)[i].first;
        std::int64_t ddy = (*pts)[j].second - (*pts)[i].second;
        const std::int64_t g = std::gcd(ddx, ddy);
        ddx /= g;
        ddy /= g;
        if (ddx < 0 || (ddx == 0 && ddy < 0)) {
          ddx = -ddx;
          ddy = -ddy;
        }
        dirs.emplace_back(ddx, ddy);
      }
      for (const auto& [d, c] : detail::tally(dirs)) {
        distinct_on_lines += BigInt(static_cast<unsigned long>(c * (c - 1)));
      }
    }
  } else {
    std::vector<std::pair<int, Scalar>> dirs;
    const auto pp = p.points();
    for (std::size_t i = 0; i < n; ++i) {
      dirs.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const Scalar ddx = pp[j].x - pp[i].x;
        if (ddx.is_zero()) {
          dirs.emplace_back(1, Scalar(0));
        } else {
          dirs.emplace_back(0, (pp[j].y - pp[i].y) / ddx);
        }
      }
      for (const auto& [d, c] : detail::tally(dirs)) {
        distinct_on_lines += BigInt(static_cast<unsigned long>(c * (c - 1)));
      }
    }
  }
  return cube_part(n) + distinct_on_lines;
}

namespace {

using RatioTally = std::vector<std::pair<detail::Fraction64, std::uint64_t>>;

// The six orderings of a triple a < b < c give the anharmonic orbit of (b - a) / (c - a).
// An orbit is keyed by its member in (0, 1/2]: min(b - a, c - b) / (c - a).
// OrbitTally counts unordered triples per key, sorted by key.
RatioTally runs(std::vector<detail::Fraction64>& keys) {
  std::sort(keys.begin(), keys.end());
  RatioTally out;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.emplace_back(keys[i], j - i);
    i = j;
  }
  return out;
}

std::size_t triples(std::size_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

RatioTally orbit_tally(std::vector<std::int64_t> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<detail::Fraction64> keys;
  keys.reserve(triples(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      for (std::size_t k = j + 1; k < xs.size(); ++k) {
        keys.push_back(detail::reduce(std::min(xs[j] - xs[i], xs[k] - xs[j]), xs[k] - xs[i]));
      }
    }
  }
  return runs(keys);
}

// Rationals with 31-bit parts; nullopt once a key leaves 64 bits.
std::optional<RatioTally> orbit_tally_fractions(const FiniteSet& xs) {
  std::vector<std::pair<std::int64_t, std::int64_t>> f;
  for (const auto& x : xs) {
    const BigInt p = x.numerator(), q = x.denominator();
    if (mpz_sizeinbase(p.get_mpz_t(), 2) > 31 || mpz_sizeinbase(q.get_mpz_t(), 2) > 31) return std::nullopt;
    f.emplace_back(p.get_si(), q.get_si());
  }
  const std::size_t n = f.size();
  // d[i * n + j] = x_j - x_i > 0 for i < j, as FiniteSet iterates in increasing order
  std::vector<detail::Fraction64> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = detail::reduce(f[j].first * f[i].second - f[i].first * f[j].second, f[i].second * f[j].second);
    }
  }
  const auto less = [](const detail::Fraction64& u, const detail::Fraction64& v) {
    return static_cast<__int128>(u.p) * v.q < static_cast<__int128>(v.p) * u.q;
  };
  std::vector<detail::Fraction64> keys;
  keys.reserve(triples(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto& u = std::min(d[i * n + j], d[j * n + k], less);
        const auto& v = d[i * n + k];
        const std::int64_t g1 = std::gcd(u.p, v.p), g2 = std::gcd(u.q, v.q);
        const __int128 num = static_cast<__int128>(u.p / g1) * (v.q / g2);
        const __int128 den = static_cast<__int128>(u.q / g2) * (v.p / g1);
        if (num > INT64_MAX || den > INT64_MAX) return std::nullopt;
        keys.push_back({static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)});
      }
    }
  }
  return runs(keys);
}

std::map<Scalar, std::uint64_t> ratio_tally_exact(const FiniteSet& xs) {
  std::map<Scalar, std::uint64_t> out;
  for (const auto& x1 : xs) {
    for (const auto& x2 : xs) {
      if (x2 == x1) continue;
      for (const auto& x3 : xs) {
        if (x3 == x1) continue;
        ++out[(x2 - x1) / (x3 - x1)];
      }
    }
  }
  return out;
}

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

// Sum over ratios rho != 1 of r_x(rho) r_y(rho), r counting ordered distinct triples.
// Each value of a generic orbit is hit once per triple; the orbit of 1/2 has three values hit twice.
BigInt join(const RatioTally& rx, const RatioTally& ry) {
  BigInt total = 0;
  const detail::Fraction64 half{1, 2};
  std::size_t i = 0, j = 0;
  while (i < rx.size() && j < ry.size()) {
    if (rx[i].first < ry[j].first) {
      ++i;
    } else if (ry[j].first < rx[i].first) {
      ++j;
    } else {
      total += big(rx[i].first == half ? 12 : 6) * big(rx[i].second) * big(ry[j].second);
      ++i;
      ++j;
    }
  }
  return total;
}

}  // namespace

BigInt product_collinear_triples(const FiniteSet& x, const FiniteSet& y) {
  const BigInt n = big(x.size());
  const BigInt m = big(y.size());
  BigInt total = n * m * (n + m - 1) * (n + m - 1);
  auto ix = image_of(x, 61);
  auto iy = image_of(y, 61);
  // rho = 1 comes from x2 = x3
  const BigInt ones = n * (n - 1) * m * (m - 1);
  if (ix && iy) {
    const RatioTally rx = orbit_tally(ix->n);
    return total + ones + join(rx, (x == y) ? rx : orbit_tally(iy->n));
  }
  if (auto fx = orbit_tally_fractions(x)) {
    if (auto fy = (x == y) ? fx : orbit_tally_fractions(y)) return total + ones + join(*fx, *fy);
  }
  const auto rx = ratio_tally_exact(x);
  const auto ry = ratio_tally_exact(y);
  for (const auto& [rho, c] : rx) {
    if (auto it = ry.find(rho); it != ry.end()) total += big(c) * big(it->second);
  }
  return total;
}

ErChain er_chain(const FiniteSet& a, std::uint64_t cube_budget) {
  if (a.size() < 2) throw DomainError("er_chain needs |A| >= 2");
  if (!a.all_positive()) throw DomainError("er_chain needs positive elements");
  const std::uint64_t na = a.size();
  ErChain ch{rep_counts(a, a, Op::add), 0, a, 0, a, std::nullopt, 0, 0, {}, {}};
  for (const auto& [x, c] : ch.n.entries()) ch.energy += c * c;
  const std::uint64_t e = ch.energy;

  std::vector<Scalar> f;
  std::uint64_t sum_f2 = 0;
  for (const auto& [x, c] : ch.n.entries()) {
    if (2 * na * na * c > e) {
      f.push_back(x);
      ch.u += c;
      sum_f2 += c * c;
    }
  }
  ch.f = FiniteSet::from_sorted(std::move(f));
  ch.s = unite(a, ch.f);
  ch.k_size = std::min(productset(a, a).size(), quotientset(a, a).size());

  ch.checks["sum_F"] = 2 * sum_f2 >= e;
  ch.checks["est_U"] = 2 * na * ch.u >= e;
  ch.checks["est_F+A"] = (ch.f.size() + na) * e <= 4 * na * na * ch.u;

  // Quadruples (a, b, c, d) with ab = cd, a, c in F(e), b, d in F(f) give the
  // triples (e, f), (e + a, f + d), (e + c, f + b), injectively.
  // Their number is sum over mu of Q(mu)^2, Q(mu) = sum_e #{(a, c) in F(e)^2 : a/c = mu}.
  if (auto img = detail::integer_image(a, ch.f, 61)) {
    const auto& av = img->sets[0];
    const auto& fv = img->sets[1];
    detail::FractionCounter q(na * na);
    std::vector<std::int64_t> fe;
    for (auto x : av) {
      fe.clear();
      for (auto y : av) {
        if (std::binary_search(fv.begin(), fv.end(), x + y)) fe.push_back(y);
      }
      for (auto u : fe) {
        for (auto v : fe) q.add(detail::reduce(u, v));
      }
    }
    q.for_each([&](detail::Fraction64, std::uint64_t c) { ch.t_construction += big(c) * big(c); });
  } else {
    std::map<Scalar, std::uint64_t> q;
    for (const auto& x : a) {
      std::vector<Scalar> fe;
      for (const auto& y : a) {
        if (ch.f.contains(x + y)) fe.push_back(y);
      }
      for (const auto& u : fe) {
        for (const auto& v : fe) ++q[u / v];
      }
    }
    for (const auto& [mu, c] : q) ch.t_construction += big(c) * big(c);
  }

  const std::uint64_t ns = ch.s.size();
  if (static_cast<double>(ns) * ns * ns <= static_cast<double>(cube_budget)) {
    ch.t = product_collinear_triples(ch.s, ch.s);
  }
  const BigInt& t_for_check = ch.t ? *ch.t : ch.t_construction;
  const BigInt u4 = big(ch.u) * big(ch.u) * big(ch.u) * big(ch.u);
  ch.checks["tripple_low"] = t_for_check * big(ch.k_size) * big(na) * big(na) >= u4;

  const PowerProduct inv_log = PowerProduct::log2_power(na, Scalar(-1));
  if (ch.t) {
    ch.ratios["T/(|A+F|^4 log|A|)"] = PowerProduct(Scalar(*ch.t)) / PowerProduct(Scalar(big(ns)).pow(4)) * inv_log;
  }
  const Scalar e4 = Scalar(big(e)).pow(4);
  ch.ratios["E^4/(K|A|^10 log|A|)"] =
      PowerProduct(e4 / (Scalar(big(ch.k_size)) * Scalar(big(na)).pow(10))) * inv_log;
  return ch;
}

namespace {

std::vector<std::pair<Scalar, Scalar>> probe_coefficients() {
  return {{Scalar(1), Scalar(-2)}, {Scalar(-2), Scalar(1)}, {Scalar::fraction(-1, 2), Scalar::fraction(-1, 2)},
          {Scalar(-1), Scalar(1)}, {Scalar(1), Scalar(-1)}, {Scalar(-1), Scalar(-1)}};
}

}  // namespace

ClusterReport solymosi_cluster_report(const FiniteSet& a, const Scalar& tau, std::size_t m,
                                      const std::optional<FiniteSet>& s_sub) {
  if (m < 2) throw DomainError("cluster needs two slopes");
  if (!a.all_positive()) throw DomainError("cluster construction needs positive elements");
  std::optional<FiniteSet> s_tau;
  for (auto& slice : dyadic_slices(a)) {
    if (slice.tau == tau) s_tau = slice.lambdas;
  }
  if (!s_tau) throw DomainError("slice S_tau is empty");
  if (s_sub && !s_sub->is_subset_of(*s_tau)) throw DomainError("S' must be a subset of S_tau");
  ClusterReport r{.tau = tau, .m = m, .s_prime = s_sub ? *s_sub : *s_tau};
  const std::size_t ns = r.s_prime.size();
  if (m > ns) throw DomainError("cluster needs M <= |S'|");

  auto img = detail::integer_image(a, 40);
  if (!img) throw ResourceError("cluster elements too large for the lattice kernel");
  const auto& av = img->sets[0];
  std::vector<std::int64_t> sums;
  sums.reserve(av.size() * av.size());
  for (auto x : av) {
    for (auto y : av) sums.push_back(x + y);
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  r.sumset_size = sums.size();

  // Points of A x A on the line y = lambda x.
  const auto elems = a.elements();
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> cloud(ns);
  std::vector<FiniteSet> fibers;
  fibers.reserve(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    std::vector<Scalar> fib;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const Scalar y = r.s_prime[k] * elems[i];
      auto it = std::lower_bound(elems.begin(), elems.end(), y);
      if (it != elems.end() && *it == y) {
        cloud[k].emplace_back(av[i], av[it - elems.begin()]);
        fib.push_back(y);
      }
    }
    fibers.push_back(FiniteSet::from_sorted(std::move(fib)));
  }

  // sigma: cheap probes first, exact maximum only if the probes leave 32 sigma <= tau^2 open.
  const Scalar tau2 = tau * tau;
  const auto probes = probe_coefficients();
  std::uint64_t lower = 0;
  bool refuted = false;
  for (std::size_t i = 0; i < ns && !refuted; ++i) {
    for (std::size_t j = i + 1; j < ns && !refuted; ++j) {
      for (std::size_t k = j + 1; k < ns && !refuted; ++k) {
        for (const auto& [c2, c3] : probes) {
          lower = std::max(lower, sigma_count(Scalar(1), fibers[i], c2, fibers[j], c3, fibers[k]).count);
        }
        refuted = Scalar(big(32 * lower)) > tau2;
      }
    }
  }
  if (refuted) {
    r.sigma = lower;
    r.sigma_exact = false;
  } else {
    double work = 0;
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t j = i + 1; j < ns; ++j) {
        for (std::size_t k = j + 1; k < ns; ++k) {
          const double l = static_cast<double>(fibers[i].size() * fibers[j].size() * fibers[k].size());
          work += l * l;
        }
      }
    }
    if (work > 2e10) throw ResourceError("exact cluster sigma exceeds work budget");
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t j = i + 1; j < ns; ++j) {
        for (std::size_t k = j + 1; k < ns; ++k) s = std::max(s, sigma_max(fibers[i], fibers[j], fibers[k]).count);
      }
    }
    r.sigma = s;
    r.sigma_exact = true;
  }
  const Scalar sigma(big(r.sigma));
  const Scalar sumset2 = Scalar(big(r.sumset_size)).pow(2);
  r.cond_sigma = r.sigma_exact && Scalar(32) * sigma <= tau2;
  r.cond_sumset = tau2 * tau2 <= sumset2 * sigma;

  const std::size_t k = ns / m;
  const Scalar pairs(big(m * (m - 1) / 2));
  const Scalar m4 = Scalar(big(m)).pow(4);
  std::vector<std::pair<std::int64_t, std::int64_t>> group_sums;
  for (std::size_t g = 0; g < k; ++g) {
    group_sums.clear();
    std::vector<Scalar> slopes;
    for (std::size_t p = g * m; p < (g + 1) * m; ++p) {
      slopes.push_back(r.s_prime[p]);
      for (std::size_t q = p + 1; q < (g + 1) * m; ++q) {
        for (const auto& u : cloud[p]) {
          for (const auto& v : cloud[q]) group_sums.emplace_back(u.first + v.first, u.second + v.second);
        }
      }
    }
    std::sort(group_sums.begin(), group_sums.end());
    group_sums.erase(std::unique(group_sums.begin(), group_sums.end()), group_sums.end());
    for (const auto& [sx, sy] : group_sums) {
      if (!std::binary_search(sums.begin(), sums.end(), sx) || !std::binary_search(sums.begin(), sums.end(), sy)) {
        r.sums_in_sumset = false;
      }
    }
    ClusterGroup cg{.slopes = FiniteSet::from_sorted(std::move(slopes)),
                    .distinct_sums = group_sums.size(),
                    .rho_lower = tau2 * pairs - sigma * m4};
    if (r.sigma_exact) cg.rho_ok = Scalar(big(cg.distinct_sums)) >= std::max(Scalar(0), cg.rho_lower);
    r.total_distinct_sums += cg.distinct_sums;
    r.groups.push_back(std::move(cg));
  }
  r.total_within_square = Scalar(big(r.total_distinct_sums)) <= sumset2;

  const Scalar tau3s = tau2 * tau * Scalar(big(ns));
  if (r.sigma > 0) {
    r.lemma_rhs = PowerProduct(tau3s / Scalar(128)) / PowerProduct::power(sigma, Scalar::fraction(1, 2));
    r.conclusion = Scalar(128 * 128) * sumset2 * sumset2 * sigma >= tau3s * tau3s;
  }
  r.lemma_pass = !r.conditions_hold() || (r.conclusion && r.total_within_square);
  return r;
}

}  // namespace sumprod
