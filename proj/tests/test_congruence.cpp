#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "thinorbit/congruence.hpp"
#include "thinorbit/fixtures.hpp"

using namespace thinorbit;

namespace {

std::set<std::int64_t> as_set(const std::vector<std::int64_t>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("modular matrices reduce, multiply, and invert") {
  Mat2 m = Mat2::make(10, 3, 3, 1);
  ModMat r = reduce_mod(m, 7);
  REQUIRE(r.a == 3);
  REQUIRE(r.b == 3);
  REQUIRE(r.c == 3);
  REQUIRE(r.d == 1);

  ModMat rn = reduce_mod(Mat2::make(1, -3, 0, 1), 7);
  REQUIRE(rn.b == 4);  // negative entries land in [0, q)

  ModMat prod = modmat_mul(r, modmat_inv(r));
  REQUIRE(prod == reduce_mod(Mat2::identity(), 7));
  REQUIRE(modmat_mul(modmat_inv(r), r) == reduce_mod(Mat2::identity(), 7));
}

TEST_CASE("residue sets behave identically in dense and sparse regimes") {
  for (std::int64_t q : {(std::int64_t)8, (std::int64_t)1 << 20}) {
    ResidueSet s(q);
    REQUIRE(s.size() == 0);
    s.insert(3);
    s.insert(3);
    s.insert(-1);  // reduces to q - 1
    s.insert(q + 5);
    REQUIRE(s.size() == 3);
    REQUIRE(s.contains(3));
    REQUIRE(s.contains(q - 1));
    REQUIRE(s.contains(5));
    REQUIRE_FALSE(s.contains(0));
    REQUIRE(s.sorted() == std::vector<std::int64_t>{3, 5, q - 1});
  }
}

TEST_CASE("group orders of the full modular quotients") {
  REQUIRE(int128_to_string(sl2_order(1)) == "1");
  REQUIRE(int128_to_string(sl2_order(2)) == "6");
  REQUIRE(int128_to_string(sl2_order(3)) == "24");
  REQUIRE(int128_to_string(sl2_order(4)) == "48");
  REQUIRE(int128_to_string(sl2_order(6)) == "144");
  REQUIRE(int128_to_string(sl2_order(9)) == "648");
  REQUIRE(int128_to_string(sl2_order(47)) == "103776");
}

TEST_CASE("finite quotients of the thin fixture") {
  GroupSpec g = fixture_spec("lubotzky3-01-01");

  SECTION("mod 3 the generators are trivial") {
    CongruenceTable t = subgroup_closure(g, 3);
    REQUIRE(t.quotient.size() == 1);
    REQUIRE_FALSE(t.full_quotient);
  }
  SECTION("mod 2 the quotient is everything") {
    CongruenceTable t = subgroup_closure(g, 2);
    REQUIRE(t.quotient.size() == 6);
    REQUIRE(t.full_quotient);
  }
  SECTION("mod 9 the quotient is the nine translates") {
    CongruenceTable t = subgroup_closure(g, 9);
    REQUIRE(t.quotient.size() == 9);
    for (const ModMat& m : t.quotient) {
      REQUIRE(m.a == 1);
      REQUIRE(m.d == 1);
      REQUIRE(m.b % 3 == 0);
      REQUIRE(m.c % 3 == 0);
    }
  }
  SECTION("closures match the set-based oracle") {
    for (std::int64_t q : {2, 3, 4, 5, 6, 9, 27}) {
      CongruenceTable t = subgroup_closure(g, q);
      REQUIRE(t.quotient.size() == oracles::quotient_closure(g, q).size());
    }
  }
  SECTION("quotient cap aborts oversized closures") {
    REQUIRE_THROWS_AS(subgroup_closure(g, 47, 100), capacity_error);
  }
}

TEST_CASE("admissible residues of the two thin instances") {
  GroupSpec g01 = fixture_spec("lubotzky3-01-01");
  GroupSpec g75 = fixture_spec("lubotzky3-01-75");

  REQUIRE(admissible_residues(g01, 9).sorted() ==
          std::vector<std::int64_t>{1});
  REQUIRE(admissible_residues(g01, 3).sorted() ==
          std::vector<std::int64_t>{1});
  REQUIRE(admissible_residues(g01, 27).sorted() ==
          std::vector<std::int64_t>{1, 10, 19});
  REQUIRE(admissible_residues(g01, 2).sorted() ==
          std::vector<std::int64_t>{0, 1});

  REQUIRE(admissible_residues(g75, 3).sorted() ==
          std::vector<std::int64_t>{2});
  REQUIRE(admissible_residues(g75, 9).sorted() ==
          std::vector<std::int64_t>{2, 5, 8});

  SECTION("every modulus agrees with the brute-force definition") {
    for (std::int64_t q = 1; q <= 30; ++q) {
      std::set<std::int64_t> want = oracles::admissible_oracle(g01, q);
      REQUIRE(as_set(admissible_residues(g01, q).sorted()) == want);
    }
  }
}

TEST_CASE("obstruction modulus discovery") {
  SECTION("first thin instance: period nine, one class") {
    GroupSpec g = fixture_spec("lubotzky3-01-01");
    ObstructionReport rep = discover_Z(g);
    REQUIRE(rep.Z == 9);
    REQUIRE(rep.admissible_classes == std::vector<std::int64_t>{1});
    REQUIRE(rep.density_num == 1);
    REQUIRE(rep.density_den == 9);
    REQUIRE(rep.search_bound >= 27);

    // the only prime with a nonzero stabilization exponent is 3
    for (const PrimeStabilization& ps : rep.primes) {
      if (ps.p == 3) {
        REQUIRE(ps.k == 2);
        REQUIRE(ps.p_to_k == 9);
      } else {
        REQUIRE(ps.k == 0);
      }
    }

    REQUIRE(is_admissible(rep, 1));
    REQUIRE(is_admissible(rep, 9 * 1234 + 1));
    REQUIRE(is_admissible(rep, -8));
    REQUIRE_FALSE(is_admissible(rep, 2));
    REQUIRE_FALSE(is_admissible(rep, 9 * 1234 + 4));
  }
  SECTION("second thin instance: period three, one class") {
    GroupSpec g = fixture_spec("lubotzky3-01-75");
    ObstructionReport rep = discover_Z(g);
    REQUIRE(rep.Z == 3);
    REQUIRE(rep.admissible_classes == std::vector<std::int64_t>{2});
    REQUIRE(rep.density_num == 1);
    REQUIRE(rep.density_den == 3);
    REQUIRE(is_admissible(rep, 2));
    REQUIRE(is_admissible(rep, -1));
    REQUIRE_FALSE(is_admissible(rep, 3));
  }
  SECTION("report serializes with the summary line") {
    GroupSpec g = fixture_spec("lubotzky3-01-01");
    std::string csv = obstruction_csv(discover_Z(g));
    REQUIRE(csv.find("Z,9,classes,1,c,1/9") != std::string::npos);
    REQUIRE(csv.find("3,") != std::string::npos);
  }
  SECTION("power bound failure is loud") {
    GroupSpec g = fixture_spec("lubotzky3-01-01");
    // forcing stabilization to be found within zero powers must fail at 3
    REQUIRE_THROWS_AS(discover_Z(g, 50, 1), capacity_error);
  }
}

TEST_CASE("projection compatibility between stacked moduli") {
  GroupSpec g = fixture_spec("lubotzky3-01-01");
  // classes mod 27 must project onto classes mod 9, and classes mod 9 must
  // be exactly the full preimage of classes mod 3 once stabilized... not
  // yet at 9 (that is the point of Z = 9)
  std::set<std::int64_t> mod27, mod9, mod3;
  for (std::int64_t r : admissible_residues(g, 27).sorted())
    mod27.insert(r % 9);
  for (std::int64_t r : admissible_residues(g, 9).sorted()) mod9.insert(r);
  for (std::int64_t r : admissible_residues(g, 3).sorted()) mod3.insert(r);
  REQUIRE(mod27 == mod9);
  std::set<std::int64_t> mod9to3;
  for (std::int64_t r : mod9) mod9to3.insert(r % 3);
  REQUIRE(mod9to3 == mod3);
}

TEST_CASE("composite moduli factor through coprime parts") {
  GroupSpec g = fixture_spec("lubotzky3-01-01");
  // admissible mod 18 should be the CRT combination of mod 2 and mod 9
  std::set<std::int64_t> combined;
  for (std::int64_t r2 : admissible_residues(g, 2).sorted())
    for (std::int64_t r9 : admissible_residues(g, 9).sorted())
      for (std::int64_t n = 0; n < 18; ++n)
        if (n % 2 == r2 && n % 9 == r9) combined.insert(n);
  REQUIRE(as_set(admissible_residues(g, 18).sorted()) == combined);
}

TEST_CASE("non-full quotients are flagged with their index") {
  GroupSpec g = fixture_spec("lubotzky3-01-01");
  BadModulusReport rep = bad_modulus_probe(g, {2, 3, 9});
  REQUIRE(rep.entries.size() == 3);
  REQUIRE(rep.entries[0].full_quotient);
  REQUIRE(int128_to_string(rep.entries[0].index) == "1");
  REQUIRE_FALSE(rep.entries[1].full_quotient);
  REQUIRE(int128_to_string(rep.entries[1].index) == "24");
  REQUIRE_FALSE(rep.entries[2].full_quotient);
  REQUIRE(int128_to_string(rep.entries[2].index) == "72");
  REQUIRE(rep.lcm_candidate == 9);
}

TEST_CASE("int128 decimal rendering") {
  REQUIRE(int128_to_string(0) == "0");
  REQUIRE(int128_to_string(-1) == "-1");
  __int128 big = (__int128)1'000'000'000'000'000'000 * 1'000;
  REQUIRE(int128_to_string(big) == "1000000000000000000000");
}
