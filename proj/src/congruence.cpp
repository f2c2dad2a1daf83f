#include "thinorbit/congruence.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace thinorbit {

namespace {

std::uint32_t mod_reduce(std::int64_t x, std::int64_t q) {
  std::int64_t r = x % q;
  if (r < 0) r += q;
  return (std::uint32_t)r;
}

std::uint32_t mul_mod(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  return (std::uint32_t)(((std::uint64_t)x * y) % q);
}

std::uint32_t add_mod(std::uint32_t x, std::uint32_t y, std::uint32_t q) {
  std::uint64_t s = (std::uint64_t)x + y;
  if (s >= q) s -= q;
  return (std::uint32_t)s;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace

std::string int128_to_string(__int128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  std::string s;
  while (x != 0) {
    int digit = (int)(neg ? -(x % 10) : (x % 10));
    s.push_back((char)('0' + digit));
    x /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

ModMat reduce_mod(const Mat2& x, std::int64_t q) {
  if (q < 1) throw config_error("modulus must be >= 1, got " +
                                std::to_string(q));
  if (q > std::numeric_limits<std::uint32_t>::max())
    throw capacity_error("modulus " + std::to_string(q) +
                         " exceeds the supported 32-bit range");
  ModMat m;
  m.q = (std::uint32_t)q;
  m.a = mod_reduce(x.a, q);
  m.b = mod_reduce(x.b, q);
  m.c = mod_reduce(x.c, q);
  m.d = mod_reduce(x.d, q);
  return m;
}

ModMat modmat_mul(const ModMat& x, const ModMat& y) {
  if (x.q != y.q) throw config_error("modmat_mul: mismatched moduli");
  ModMat m;
  m.q = x.q;
  m.a = add_mod(mul_mod(x.a, y.a, x.q), mul_mod(x.b, y.c, x.q), x.q);
  m.b = add_mod(mul_mod(x.a, y.b, x.q), mul_mod(x.b, y.d, x.q), x.q);
  m.c = add_mod(mul_mod(x.c, y.a, x.q), mul_mod(x.d, y.c, x.q), x.q);
  m.d = add_mod(mul_mod(x.c, y.b, x.q), mul_mod(x.d, y.d, x.q), x.q);
  return m;
}

ModMat modmat_inv(const ModMat& x) {
  // det = 1 mod q, so the adjugate is the inverse
  ModMat m;
  m.q = x.q;
  m.a = x.d;
  m.b = (x.b == 0) ? 0 : x.q - x.b;
  m.c = (x.c == 0) ? 0 : x.q - x.c;
  m.d = x.a;
  return m;
}

// ---------------------------------------------------------------------------
// ResidueSet

ResidueSet::ResidueSet(std::int64_t q) : q_(q) {
  if (q < 1) throw config_error("ResidueSet modulus must be >= 1");
  dense_ = q <= (1 << 16);
  if (dense_) bits_.assign((std::size_t)q, false);
}

void ResidueSet::insert(std::int64_t r) {
  if (q_ == 0) throw config_error("ResidueSet used before initialization");
  std::int64_t v = mod_reduce(r, q_);
  if (dense_) {
    if (!bits_[(std::size_t)v]) {
      bits_[(std::size_t)v] = true;
      ++count_;
    }
  } else {
    auto it = std::lower_bound(sparse_.begin(), sparse_.end(), v);
    if (it == sparse_.end() || *it != v) {
      sparse_.insert(it, v);
      ++count_;
    }
  }
}

bool ResidueSet::contains(std::int64_t r) const {
  if (q_ == 0) return false;
  std::int64_t v = mod_reduce(r, q_);
  if (dense_) return bits_[(std::size_t)v];
  return std::binary_search(sparse_.begin(), sparse_.end(), v);
}

std::size_t ResidueSet::size() const { return count_; }

std::vector<std::int64_t> ResidueSet::sorted() const {
  if (!dense_) return sparse_;
  std::vector<std::int64_t> out;
  out.reserve(count_);
  for (std::int64_t r = 0; r < q_; ++r)
    if (bits_[(std::size_t)r]) out.push_back(r);
  return out;
}

// ---------------------------------------------------------------------------
// Quotient closure

__int128 sl2_order(std::int64_t q) {
  if (q < 1) throw config_error("modulus must be >= 1");
  __int128 order = (__int128)q * q * q;
  for (auto [p, e] : factorize(q)) {
    (void)e;
    order = order / ((__int128)p * p) * ((__int128)p * p - 1);
  }
  return order;
}

CongruenceTable subgroup_closure(const GroupSpec& g, std::int64_t q,
                                 std::uint64_t quotient_cap) {
  if (q < 1) throw config_error("modulus must be >= 1, got " +
                                std::to_string(q));
  CongruenceTable table;
  table.q = q;
  table.admissible = ResidueSet(q);

  std::vector<ModMat> steps;
  for (const Mat2& gen : g.generators) {
    ModMat r = reduce_mod(gen, q);
    for (const ModMat& s : {r, modmat_inv(r)})
      if (std::find(steps.begin(), steps.end(), s) == steps.end())
        steps.push_back(s);
  }

  ModMat id = reduce_mod(Mat2::identity(), q);

  // packed BFS for q in the 16-bit range, ordered-set fallback above
  auto run_bfs = [&](auto insert_probe) {
    std::vector<ModMat> frontier{id};
    table.quotient.push_back(id);
    insert_probe(id);
    std::size_t head = 0;
    while (head < table.quotient.size()) {
      ModMat cur = table.quotient[head++];
      for (const ModMat& s : steps) {
        ModMat nxt = modmat_mul(cur, s);
        if (insert_probe(nxt)) {
          if (table.quotient.size() >= quotient_cap)
            throw capacity_error("quotient mod " + std::to_string(q) +
                                 " exceeded the capacity of " +
                                 std::to_string(quotient_cap) + " elements");
          table.quotient.push_back(nxt);
        }
      }
    }
  };

  if (q <= (1 << 16)) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(4096);
    auto pack = [q](const ModMat& m) {
      return (((((std::uint64_t)m.a * q) + m.b) * q + m.c) * q) + m.d;
    };
    run_bfs([&](const ModMat& m) { return seen.insert(pack(m)).second; });
  } else {
    std::set<std::array<std::uint32_t, 4>> seen;
    run_bfs([&](const ModMat& m) {
      return seen.insert({m.a, m.b, m.c, m.d}).second;
    });
  }

  std::uint32_t vq0 = mod_reduce(g.v[0], q), vq1 = mod_reduce(g.v[1], q);
  std::uint32_t wq0 = mod_reduce(g.w[0], q), wq1 = mod_reduce(g.w[1], q);
  for (const ModMat& m : table.quotient) {
    std::uint32_t top = add_mod(mul_mod(m.a, wq0, m.q), mul_mod(m.b, wq1, m.q),
                                m.q);
    std::uint32_t bot = add_mod(mul_mod(m.c, wq0, m.q), mul_mod(m.d, wq1, m.q),
                                m.q);
    std::uint32_t r =
        add_mod(mul_mod(vq0, top, m.q), mul_mod(vq1, bot, m.q), m.q);
    table.admissible.insert(r);
  }

  table.full_quotient = ((__int128)table.quotient.size() == sl2_order(q));
  return table;
}

ResidueSet admissible_residues(const GroupSpec& g, std::int64_t q,
                               std::uint64_t quotient_cap) {
  return subgroup_closure(g, q, quotient_cap).admissible;
}

// ---------------------------------------------------------------------------
// Obstruction modulus discovery

ObstructionReport discover_Z(const GroupSpec& g, std::int64_t prime_bound,
                             int power_bound, std::uint64_t quotient_cap) {
  if (prime_bound < 2) throw config_error("prime_bound must be >= 2");
  if (power_bound < 0) throw config_error("power_bound must be >= 0");

  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p <= prime_bound; ++p) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (prime) primes.push_back(p);
  }

  ObstructionReport report;
  std::vector<std::pair<std::int64_t, ResidueSet>> contributing;  // (p^k, set)

  for (std::int64_t p : primes) {
    // sizes of the admissible sets mod p^0, p^1, ...; stabilization at k
    // means the set mod p^{k+1} is the full preimage of the one mod p^k,
    // which (projection being onto) is equivalent to the size ratio p.
    std::size_t prev_size = 1;  // admissible mod 1 = {0}
    std::int64_t modulus = 1;
    int k = -1;
    ResidueSet stabilized_set(1);
    stabilized_set.insert(0);
    for (int j = 1; j <= power_bound + 1; ++j) {
      std::int64_t next_modulus = modulus * p;
      ResidueSet cur = admissible_residues(g, next_modulus, quotient_cap);
      report.search_bound = std::max(report.search_bound, next_modulus);
      if (cur.size() == prev_size * (std::size_t)p) {
        k = j - 1;
        break;
      }
      modulus = next_modulus;
      prev_size = cur.size();
      stabilized_set = cur;
    }
    if (k < 0)
      throw capacity_error("admissible residues mod powers of " +
                           std::to_string(p) +
                           " did not stabilize within power_bound = " +
                           std::to_string(power_bound));
    PrimeStabilization ps;
    ps.p = p;
    ps.k = k;
    ps.p_to_k = modulus;  // p^k
    report.primes.push_back(ps);
    if (k > 0) contributing.emplace_back(modulus, stabilized_set);
  }

  // CRT join of the contributing prime-power class sets
  std::int64_t Z = 1;
  for (auto& [m, set] : contributing) Z = chk_mul(Z, m, "obstruction modulus");
  report.Z = Z;
  std::vector<std::int64_t> classes{0};
  std::int64_t built = 1;
  for (auto& [m, set] : contributing) {
    std::vector<std::int64_t> next;
    next.reserve(classes.size() * set.size());
    for (std::int64_t base : classes) {
      for (std::int64_t r : set.sorted()) {
        // x = base mod built, x = r mod m, gcd(built, m) = 1
        for (std::int64_t x = base; x < built * m; x += built) {
          if (x % m == r) {
            next.push_back(x);
            break;
          }
        }
      }
    }
    built *= m;
    classes.swap(next);
  }
  std::sort(classes.begin(), classes.end());
  report.admissible_classes = classes;

  std::int64_t num = (std::int64_t)classes.size();
  std::int64_t gg = std::gcd(num, Z);
  report.density_num = num / gg;
  report.density_den = Z / gg;
  return report;
}

bool is_admissible(const ObstructionReport& report, std::int64_t n) {
  std::int64_t r = n % report.Z;
  if (r < 0) r += report.Z;
  return std::binary_search(report.admissible_classes.begin(),
                            report.admissible_classes.end(), r);
}

std::string obstruction_csv(const ObstructionReport& report) {
  std::string out = "prime,power,stabilized_k\n";
  for (const PrimeStabilization& ps : report.primes)
    out += std::to_string(ps.p) + "," + std::to_string(ps.p_to_k) + "," +
           std::to_string(ps.k) + "\n";
  out += "Z," + std::to_string(report.Z) + ",classes,";
  for (std::size_t i = 0; i < report.admissible_classes.size(); ++i) {
    if (i) out += ";";
    out += std::to_string(report.admissible_classes[i]);
  }
  out += ",c," + std::to_string(report.density_num) + "/" +
         std::to_string(report.density_den) + "\n";
  return out;
}

BadModulusReport bad_modulus_probe(const GroupSpec& g,
                                   const std::vector<std::int64_t>& q_list,
                                   std::uint64_t quotient_cap) {
  BadModulusReport report;
  for (std::int64_t q : q_list) {
    CongruenceTable table = subgroup_closure(g, q, quotient_cap);
    BadModulusEntry e;
    e.q = q;
    e.full_quotient = table.full_quotient;
    e.index = sl2_order(q) / (__int128)table.quotient.size();
    report.entries.push_back(e);
    if (!table.full_quotient && factorize(q).size() == 1) {
      std::int64_t l = std::lcm(report.lcm_candidate, q);
      report.lcm_candidate = l;
    }
  }
  return report;
}

}  // namespace thinorbit
