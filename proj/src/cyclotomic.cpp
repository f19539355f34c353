#include "tlf/cyclotomic.hpp"

#include <map>
#include <mutex>

namespace tlf {

namespace {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// f *= (x^d - 1)
void mul_binomial(Poly& f, long d) {
  Poly g(f.size() + d, Int(0));
  for (size_t i = 0; i < f.size(); ++i) {
    g[i + d] += f[i];
    g[i] -= f[i];
  }
  f = std::move(g);
}

// f /= (x^d - 1), exact
void div_binomial(Poly& f, long d) {
  // f = h * x^d - h  =>  h[i] = h[i - d] - f[i]
  Poly h(f.size() - d, Int(0));
  for (size_t i = 0; i < h.size(); ++i) {
    Int prev = (i >= static_cast<size_t>(d)) ? h[i - d] : Int(0);
    h[i] = prev - f[i];
  }
  f = std::move(h);
}

Poly compute_cyclotomic(long n) {
  if (n < 1) throw ContractError("cyclotomic index must be positive");
  if (n == 1) return Poly{Int(-1), Int(1)};
  // Squarefree divisors of n with their Moebius signs.
  std::vector<long> primes;
  long m = n;
  for (long p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) primes.push_back(m);
  int np = static_cast<int>(primes.size());
  Poly f{Int(1)};
  std::vector<long> plus, minus;
  for (int mask = 0; mask < (1 << np); ++mask) {
    long sf = 1;
    for (int i = 0; i < np; ++i)
      if (mask & (1 << i)) sf *= primes[i];
    long d = n / sf;
    if (__builtin_popcount(static_cast<unsigned>(mask)) % 2 == 0)
      plus.push_back(d);
    else
      minus.push_back(d);
  }
  for (long d : plus) mul_binomial(f, d);
  for (long d : minus) div_binomial(f, d);
  trim(f);
  return f;
}

}  // namespace

const Poly& cyclotomic(long n) {
  static std::map<long, Poly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_cyclotomic(n)).first;
  return it->second;
}

Poly mul_mod_xn_minus_1(const Poly& a, const Poly& b, long n) {
  Poly c(n, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      c[(i + j) % n] += a[i] * b[j];
    }
  }
  trim(c);
  return c;
}

Poly mod_poly(Poly f, const Poly& phi) {
  if (phi.empty() || phi.back() != 1) throw ContractError("modulus must be monic");
  size_t deg = phi.size() - 1;
  // Nonzero low-order terms of phi, visited sparsely.
  std::vector<size_t> support;
  for (size_t i = 0; i < deg; ++i)
    if (phi[i] != 0) support.push_back(i);
  while (f.size() > deg) {
    size_t top = f.size() - 1;
    Int c = std::move(f.back());
    f.pop_back();
    if (c == 0) continue;
    for (size_t i : support) f[top - deg + i] -= c * phi[i];
  }
  trim(f);
  return f;
}

bool is_zero_poly(const Poly& f) {
  for (const auto& c : f)
    if (c != 0) return false;
  return true;
}

}  // namespace tlf
