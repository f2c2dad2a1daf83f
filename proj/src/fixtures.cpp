#include "thinorbit/fixtures.hpp"

#include "thinorbit/repr.hpp"

namespace thinorbit {

namespace {

GroupSpec lubotzky3(std::array<std::int64_t, 2> v,
                    std::array<std::int64_t, 2> w) {
  GroupSpec g = GroupSpec::create(
      {Mat2::make(1, 3, 0, 1), Mat2::make(1, 0, 3, 1)}, 3, v, w, 4.0);
  return g.positioned() ? g : precompose_fix(g);
}

GroupSpec gamma2() {
  return GroupSpec::create({Mat2::make(1, 2, 0, 1), Mat2::make(1, 0, 2, 1)},
                           2, {1, 0}, {5, 7}, 2.0);
}

}  // namespace

GroupSpec fixture_spec(const std::string& name) {
  if (name == "lubotzky3-01-01") return lubotzky3({0, 1}, {0, 1});
  if (name == "lubotzky3-01-75") return lubotzky3({0, 1}, {7, 5});
  if (name == "gamma2") return gamma2();
  throw config_error("unknown fixture '" + name + "'; known fixtures: " +
                     [] {
                       std::string all;
                       for (const std::string& n : fixture_names()) {
                         if (!all.empty()) all += ", ";
                         all += n;
                       }
                       return all;
                     }());
}

std::vector<std::string> fixture_names() {
  return {"lubotzky3-01-01", "lubotzky3-01-75", "gamma2"};
}

}  // namespace thinorbit
