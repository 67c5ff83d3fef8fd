#include "hb/kolyvagin.hpp"

#include <algorithm>
#include <numeric>

#include "hb/errors.hpp"

namespace hb {

namespace {

void check_odd_prime(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw ValidationError("p must be an odd prime");
}

int M_of(std::int64_t a_ell, std::uint64_t ell, std::uint64_t p) {
  std::int64_t g = std::gcd(a_ell, static_cast<std::int64_t>(ell + 1));
  return ord(g, p);
}

}  // namespace

bool is_kolyvagin_prime(const EllipticCurveQ& e, std::int64_t D, std::uint64_t p, std::uint64_t ell) {
  if (!is_prime(ell) || ell == p) return false;
  const auto l = static_cast<std::int64_t>(ell);
  if (e.conductor() % l == 0 || D % l == 0) return false;
  if ((ell + 1) % p != 0) return false;
  if (kronecker_symbol(-D, l) != -1) return false;
  return trace_of_frobenius(e, ell) % static_cast<std::int64_t>(p) == 0;
}

std::vector<KolyvaginPrime> find_kolyvagin_primes(const EllipticCurveQ& e, std::int64_t D, std::uint64_t p,
                                                  std::uint64_t bound) {
  check_odd_prime(p);
  if (e.conductor() % static_cast<unsigned long>(p) == 0) throw ValidationError("p divides N");
  make_heegner_setup(e, D, true);
  std::vector<KolyvaginPrime> out;
  // l = -1 mod p
  for (std::uint64_t ell = p - 1; ell <= bound; ell += p) {
    if (!is_kolyvagin_prime(e, D, p, ell)) continue;
    std::int64_t a = trace_of_frobenius(e, ell);
    out.push_back({ell, a, M_of(a, ell, p)});
  }
  return out;
}

int epsilon_sign(int eps, const Conductor& c) {
  if (eps != 1 && eps != -1) throw ValidationError("eps must be +1 or -1");
  return c.f_c % 2 == 0 ? eps : -eps;
}

std::vector<Conductor> enumerate_conductors(const std::vector<KolyvaginPrime>& primes, int r, int m, int eps) {
  if (r < 0) throw ValidationError("r must be nonnegative");
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t j = i + 1; j < primes.size(); ++j)
      if (primes[i].ell == primes[j].ell) throw ValidationError("primes must be distinct");

  std::vector<KolyvaginPrime> eligible;
  std::copy_if(primes.begin(), primes.end(), std::back_inserter(eligible),
               [m](const KolyvaginPrime& k) { return k.M >= m; });
  std::vector<Conductor> out;
  if (static_cast<std::size_t>(r) > eligible.size()) return out;

  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t n = eligible.size();
  while (true) {
    Conductor c;
    for (std::size_t i : idx) {
      c.factors.push_back(eligible[i]);
      c.c *= static_cast<unsigned long>(eligible[i].ell);
      if (Valuation(eligible[i].M) < c.M) c.M = Valuation(eligible[i].M);
    }
    c.f_c = r;
    c.epsilon = epsilon_sign(eps, c);
    out.push_back(std::move(c));
    // next r-subset
    int k = r - 1;
    while (k >= 0 && idx[k] == n - r + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

GroupRingElement derivative_operator(std::uint64_t ell) {
  if (ell < 1) throw ValidationError("l + 1 must be at least 2");
  GroupRingElement d(ell + 1);
  for (std::uint64_t i = 0; i <= ell; ++i) d[i] = static_cast<unsigned long>(i);
  return d;
}

GroupRingElement group_ring_multiply(const GroupRingElement& a, const GroupRingElement& b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("group ring elements must have equal nonzero length");
  const std::size_t n = a.size();
  GroupRingElement out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) out[(i + j) % n] += a[i] * b[j];
  }
  return out;
}

bool verify_derivative_identity(std::uint64_t ell) {
  const std::size_t n = ell + 1;
  GroupRingElement sigma_minus_one(n);
  sigma_minus_one[0] = -1;
  sigma_minus_one[1 % n] += 1;
  GroupRingElement lhs = group_ring_multiply(sigma_minus_one, derivative_operator(ell));
  GroupRingElement rhs(n, BigInt(-1));
  rhs[0] += static_cast<unsigned long>(n);
  return lhs == rhs;
}

int kappa_order(int m, const Valuation& m_c, int M_c) {
  if (m < 0) throw ValidationError("m must be nonnegative");
  if (m > M_c) throw ValidationError("m exceeds M(c)");
  if (m_c.is_infinite() || m <= m_c.value()) return 0;
  return m - m_c.value();
}

BoundReport sha_bounds(int m0, const std::vector<LocalData>& local_data, std::uint64_t p) {
  check_odd_prime(p);
  if (m0 < 0) throw ValidationError("m0 must be nonnegative");
  BoundReport r;
  r.p = p;
  r.m0 = m0;
  int total = 0;
  for (const LocalData& ld : local_data) {
    if (ld.q == p) throw ValidationError("p divides N");
    int v = ord(static_cast<std::int64_t>(ld.tamagawa), p);
    r.tamagawa_valuations[ld.q] = v;
    r.m_max = std::max(r.m_max, v);
    total += v;
  }
  r.exponent_kolyvagin = 2 * m0;
  r.exponent_improved = 2 * m0 - 2 * r.m_max;
  r.exponent_bsd = 2 * (m0 - total);
  r.m_infinity_lower = r.m_max;
  if (r.exponent_improved < 0) throw InternalError("m0 below m_max contradicts m_infinity >= m_max");
  return r;
}

}  // namespace hb
