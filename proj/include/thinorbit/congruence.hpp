#pragma once

// Finite quotients of the group modulo q, admissible residue sets, discovery
// of the local-obstruction modulus, and the full-quotient probe.

#include <cstdint>
#include <string>
#include <vector>

#include "thinorbit/matgroup.hpp"

namespace thinorbit {

// Matrix over Z/qZ with determinant 1 mod q; entries stored in [0, q).
struct ModMat {
  std::uint32_t a = 1, b = 0, c = 0, d = 1;
  std::uint32_t q = 1;

  friend bool operator==(const ModMat&, const ModMat&) = default;
};

ModMat reduce_mod(const Mat2& x, std::int64_t q);
ModMat modmat_mul(const ModMat& x, const ModMat& y);
ModMat modmat_inv(const ModMat& x);

// Residues mod q; dense bit storage for q <= 2^16, sorted sparse storage
// above.  Behavior is identical either way.
class ResidueSet {
 public:
  ResidueSet() = default;
  explicit ResidueSet(std::int64_t q);

  std::int64_t modulus() const { return q_; }
  void insert(std::int64_t r);  // reduced mod q first
  bool contains(std::int64_t r) const;
  std::size_t size() const;
  std::vector<std::int64_t> sorted() const;

  friend bool operator==(const ResidueSet& x, const ResidueSet& y) {
    return x.q_ == y.q_ && x.sorted() == y.sorted();
  }

 private:
  std::int64_t q_ = 0;
  bool dense_ = true;
  std::vector<bool> bits_;
  std::vector<std::int64_t> sparse_;  // kept sorted and unique
  std::size_t count_ = 0;
};

// The reduction of the group mod q together with the residues its orbit
// inner products can reach.
struct CongruenceTable {
  std::int64_t q = 1;
  std::vector<ModMat> quotient;  // closed under multiplication, contains I
  ResidueSet admissible;         // {<v g0, w> mod q : g0 in quotient}
  bool full_quotient = false;    // quotient == SL(2, Z/qZ)
};

// |SL(2, Z/qZ)| = q^3 prod_{p | q} (1 - p^-2), exactly.
__int128 sl2_order(std::int64_t q);

// Closure of the reduced generators under multiplication (with inverses
// thrown in to speed convergence; in a finite group they add nothing).
CongruenceTable subgroup_closure(const GroupSpec& g, std::int64_t q,
                                 std::uint64_t quotient_cap = 10'000'000);

ResidueSet admissible_residues(const GroupSpec& g, std::int64_t q,
                               std::uint64_t quotient_cap = 10'000'000);

// Result of the per-prime stabilization search: the least k >= 0 such that
// the admissible set mod p^{k+1} is the full preimage of the admissible set
// mod p^k.
struct PrimeStabilization {
  std::int64_t p = 0;
  int k = 0;
  std::int64_t p_to_k = 1;  // p^k, the prime-power factor contributed to Z
};

struct ObstructionReport {
  std::int64_t Z = 1;
  std::vector<std::int64_t> admissible_classes;  // sorted residues mod Z
  std::int64_t density_num = 1;                  // |classes| / Z, reduced
  std::int64_t density_den = 1;
  std::int64_t search_bound = 1;  // largest modulus examined
  std::vector<PrimeStabilization> primes;  // one entry per prime searched
};

// For each prime p <= prime_bound, finds the stabilization exponent k (or
// fails naming p if k would exceed power_bound); Z is the product of the
// p^k and the class set is the CRT join of the per-prime admissible sets.
ObstructionReport discover_Z(const GroupSpec& g, std::int64_t prime_bound = 50,
                             int power_bound = 4,
                             std::uint64_t quotient_cap = 10'000'000);

bool is_admissible(const ObstructionReport& report, std::int64_t n);

// CSV serialization: one `prime,power,stabilized_k` line per prime searched
// followed by the summary line `Z,<int>,classes,<semicolon list>,c,<n>/<d>`.
std::string obstruction_csv(const ObstructionReport& report);

struct BadModulusEntry {
  std::int64_t q = 1;
  bool full_quotient = false;
  __int128 index = 1;  // |SL(2,Z/q)| / |quotient|
};

struct BadModulusReport {
  std::vector<BadModulusEntry> entries;
  // lcm of the prime powers in the probe list whose quotient is not full
  std::int64_t lcm_candidate = 1;
};

BadModulusReport bad_modulus_probe(const GroupSpec& g,
                                   const std::vector<std::int64_t>& q_list,
                                   std::uint64_t quotient_cap = 10'000'000);

std::string int128_to_string(__int128 x);

}  // namespace thinorbit
