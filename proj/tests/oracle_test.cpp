#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "bnpin/oracle.hpp"
#include "support/random_networks.hpp"

using namespace bnpin;

namespace {

const char* kFixtureDir = BNPIN_FIXTURE_DIR;

std::string slurp(const std::string& name) {
  FILE* f = fopen((std::string(kFixtureDir) + "/" + name).c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  fclose(f);
  return out;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Reference implementation: two states are equivalent iff their output
// sequences agree for 2^n steps (the trajectories are then both inside
// their eventual cycles, so they agree forever).
struct NaiveClasses {
  std::vector<std::uint32_t> root;

  explicit NaiveClasses(const StateSpace& space) {
    const std::uint32_t total = static_cast<std::uint32_t>(space.successor.size());
    root.resize(total);
    std::iota(root.begin(), root.end(), 0u);
    for (std::uint32_t b = 1; b < total; ++b)
      for (std::uint32_t a = 0; a < b; ++a) {
        if (find(a) == find(b)) continue;
        std::uint32_t x = a, y = b;
        bool same = true;
        for (std::uint32_t step = 0; step < total && same; ++step) {
          if (space.output_label[x] != space.output_label[y]) same = false;
          x = space.successor[x];
          y = space.successor[y];
        }
        if (same) unite(a, b);
      }
  }

  std::uint32_t find(std::uint32_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  }
  void unite(std::uint32_t a, std::uint32_t b) { root[find(b)] = find(a); }

  std::uint64_t count() {
    std::uint64_t k = 0;
    for (std::uint32_t v = 0; v < root.size(); ++v)
      if (find(v) == v) ++k;
    return k;
  }

  // Smallest state equivalent to an earlier one, paired with the smallest
  // member of its class; absent when every class is a singleton.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> witness() {
    for (std::uint32_t b = 0; b < root.size(); ++b) {
      std::uint32_t r = find(b);
      std::uint32_t least = b;
      for (std::uint32_t a = 0; a < b; ++a)
        if (find(a) == r) {
          least = a;
          break;
        }
      if (least != b) return std::make_pair(least, b);
    }
    return std::nullopt;
  }
};

}  // namespace

TEST_CASE("transition tables of tiny networks") {
  SUBCASE("one negating node") {
    auto space = enumerate_state_space(parse_network("X1 = !X1\noutput Y = X1\n"));
    CHECK(space.n == 1);
    CHECK(space.p == 1);
    CHECK(space.successor == std::vector<std::uint32_t>{1, 0});
    CHECK(space.output_label == std::vector<std::uint32_t>{0, 1});
    auto v = is_observable(space);
    CHECK(v.observable);
    CHECK(v.classes == 2);
    CHECK_FALSE(v.witness.has_value());
  }

  SUBCASE("two swapping nodes") {
    auto space = enumerate_state_space(parse_network("X1 = X2\nX2 = X1\noutput Y = X2\n"));
    CHECK(space.successor == std::vector<std::uint32_t>{0, 2, 1, 3});
    CHECK(space.output_label == std::vector<std::uint32_t>{0, 0, 1, 1});
    auto v = is_observable(space);
    CHECK(v.observable);
    CHECK(v.classes == 4);
  }
}

TEST_CASE("external inputs pin to the requested values") {
  auto bn = parse_network("input U\nX1 = U\noutput Y = X1\n");

  auto low = enumerate_state_space(bn);  // unlisted inputs read FALSE
  CHECK(low.successor == std::vector<std::uint32_t>{0, 0});

  OracleOptions opts;
  opts.input_values = {{"U", true}};
  auto high = enumerate_state_space(bn, opts);
  CHECK(high.successor == std::vector<std::uint32_t>{1, 1});

  CHECK(is_observable(low).observable);
  CHECK(is_observable(high).observable);

  OracleOptions bad;
  bad.input_values = {{"V", true}};
  try {
    enumerate_state_space(bn, bad);
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(contains(e.what(), "'V' is not an input of the network"));
  }
}

TEST_CASE("enumeration cap refuses oversized spaces") {
  auto bn = parse_network("X1 = X2\nX2 = X3\nX3 = X4\nX4 = X1\noutput Y = X1\n");
  OracleOptions opts;
  opts.cap = 3;
  try {
    enumerate_state_space(bn, opts);
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(contains(e.what(), "state space 2^4 exceeds the enumeration cap 2^3"));
  }
  opts.cap = 4;
  CHECK(enumerate_state_space(bn, opts).successor.size() == 16);
}

TEST_CASE("memory estimate is a fixed formula") {
  CHECK(state_space_bytes(18) == 7340032);
  CHECK(state_space_bytes(0) == 24 + (1u << 20));
  CHECK(state_space_bytes(22) > state_space_bytes(18));
}

TEST_CASE("the 18-state model is not observable") {
  auto space = enumerate_state_space(parse_network(slurp("t_lgl.bn")));
  CHECK(space.n == 18);
  CHECK(space.successor.size() == 262144u);

  auto v = is_observable(space);
  CHECK_FALSE(v.observable);
  CHECK(v.classes == 448);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->first == 8u);    // only X4 set
  CHECK(v.witness->second == 40u);  // X4 and X6 set

  CHECK_FALSE(distinguishing_horizon(space, 8, 40).has_value());
  CHECK(distinguishing_horizon(space, 0, 1) == 0);  // X1 drives Y1 immediately

  // refinement is thread-count independent
  auto v1 = is_observable(space, 1);
  auto v4 = is_observable(space, 4);
  CHECK(v1.classes == v.classes);
  CHECK(v4.classes == v.classes);
  CHECK(v1.witness == v.witness);
  CHECK(v4.witness == v.witness);
}

TEST_CASE("unsensed pair of nodes collapses the partition") {
  auto space = enumerate_state_space(parse_network(slurp("two_pair_cycles.bn")));
  auto v = is_observable(space);
  CHECK_FALSE(v.observable);
  CHECK(v.classes == 4);
  REQUIRE(v.witness.has_value());
  CHECK(*v.witness == std::pair<std::uint32_t, std::uint32_t>(0, 4));

  CHECK_FALSE(distinguishing_horizon(space, 0, 4).has_value());
  CHECK(distinguishing_horizon(space, 0, 2) == 0);
  CHECK(distinguishing_horizon(space, 0, 1) == 1);  // X1 reaches the sensor a step later
}

TEST_CASE("partition refinement matches pairwise simulation") {
  std::mt19937 rng(20260816);
  std::uniform_int_distribution<int> nn(1, 6);
  for (int trial = 0; trial < 120; ++trial) {
    int n = nn(rng);
    std::uniform_int_distribution<int> pp(1, std::max(1, n / 2));
    auto text = testgen::random_network_text(rng, n, pp(rng), trial % 2 == 0);
    auto space = enumerate_state_space(parse_network(text));
    auto v = is_observable(space);

    NaiveClasses naive(space);
    CHECK(v.classes == naive.count());
    CHECK(v.observable == (naive.count() == space.successor.size()));
    CHECK(v.witness == naive.witness());

    if (v.witness) {
      CHECK_FALSE(distinguishing_horizon(space, v.witness->first, v.witness->second));
    } else if (space.successor.size() >= 2) {
      std::uniform_int_distribution<std::uint32_t> ss(
          0, static_cast<std::uint32_t>(space.successor.size() - 1));
      for (int k = 0; k < 10; ++k) {
        std::uint32_t a = ss(rng), b = ss(rng);
        if (a == b) continue;
        CHECK(distinguishing_horizon(space, a, b).has_value());
      }
    }
  }
}

TEST_CASE("adding a sensor never merges classes") {
  std::mt19937 rng(5551212);
  std::uniform_int_distribution<int> nn(2, 6);
  for (int trial = 0; trial < 60; ++trial) {
    int n = nn(rng);
    auto text = testgen::random_network_text(rng, n, 1, true);
    auto base = is_observable(enumerate_state_space(parse_network(text)));

    std::uniform_int_distribution<int> pick(0, n - 1);
    auto more = text + "output Z = " + testgen::var_name(pick(rng)) + "\n";
    auto wide = is_observable(enumerate_state_space(parse_network(more)));

    CHECK(wide.classes >= base.classes);
    if (base.observable) CHECK(wide.observable);
  }
}
