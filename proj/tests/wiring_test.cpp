#include <string>
#include <vector>

#include "doctest.h"

#include "bnpin/wiring.hpp"

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

WiringDigraph wire(const std::string& text, AugmentMode mode = AugmentMode::Auto) {
  return build_wiring(augment(parse_network(text), mode));
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("direct-read sensors collapse onto their states") {
  AugmentedNetwork aug = augment(parse_network("A = B\nB = A\noutput Y = !B\n"));
  CHECK(aug.collapsed);
  CHECK(aug.net.states.size() == 2);
  CHECK(aug.sensed_state == std::vector<std::uint32_t>{1});

  WiringDigraph g = build_wiring(aug);
  CHECK(g.n_state == 2);
  CHECK(g.n_output == 1);
  CHECK(g.vertices[1].directly_observable);
  CHECK_FALSE(g.vertices[0].directly_observable);
}

TEST_CASE("expression sensors get virtual states") {
  AugmentedNetwork aug = augment(parse_network("A = B\nB = A\noutput Y = A & B\n"));
  CHECK_FALSE(aug.collapsed);
  CHECK(aug.n_base == 2);
  REQUIRE(aug.net.states.size() == 3);
  CHECK(aug.net.states[2].name == "Y_state");
  CHECK(aug.sensed_state == std::vector<std::uint32_t>{2});
  // the sensor now reads the virtual state directly
  CHECK(aug.net.outputs[0].functional == std::vector<std::string>{"Y_state"});
  // and the virtual state's update is the old sensor expression
  CHECK(aug.net.states[2].functional == std::vector<std::string>{"A", "B"});
}

TEST_CASE("virtual state names dodge collisions") {
  AugmentedNetwork aug = augment(parse_network(
      "Y_state = Y_state\nA = Y_state\noutput Y = A & Y_state\n"));
  CHECK(aug.net.states.back().name == "Y_state_");
}

TEST_CASE("two sensors on one state force the generic mode") {
  std::string text = "A = B\nB = A\noutput Y1 = A\noutput Y2 = A\n";
  AugmentedNetwork aug = augment(parse_network(text));
  CHECK_FALSE(aug.collapsed);
  CHECK(aug.net.states.size() == 4);

  try {
    augment(parse_network(text), AugmentMode::Collapse);
    FAIL("expected PlanError-style failure");
  } catch (const std::exception& e) {
    CHECK(contains(e.what(), "not a direct read of a distinct state"));
  }
}

TEST_CASE("forced generic mode works on direct reads too") {
  AugmentedNetwork aug = augment(parse_network("A = B\nB = A\noutput Y = B\n"),
                                 AugmentMode::Generic);
  CHECK_FALSE(aug.collapsed);
  CHECK(aug.net.states.size() == 3);
}

TEST_CASE("wiring layout and edges") {
  // states first, then mirrors, then inputs
  WiringDigraph g = wire("input U\nA = B & U\nB = A\noutput Y = B\n");
  REQUIRE(g.vertices.size() == 4);
  CHECK(g.n_state == 2);
  CHECK(g.n_output == 1);
  CHECK(g.n_input == 1);
  CHECK(g.vertices[0].name == "A");
  CHECK(g.vertices[2].name == "Y");
  CHECK(g.vertices[3].name == "U");
  CHECK(g.vertices[2].kind == VertexKind::OutputMirror);
  CHECK(g.vertices[3].kind == VertexKind::Input);
  CHECK(g.in_neighbors[0] == std::vector<std::uint32_t>{1, 3});
  CHECK(g.in_neighbors[2] == std::vector<std::uint32_t>{1});
  CHECK(g.reads_input(0));
  CHECK_FALSE(g.reads_input(1));
}

TEST_CASE("observed path recognition") {
  WiringDigraph g = wire("A = 1\nB = A\nC = !B\noutput Y = C\n");
  // ids: A=0 B=1 C=2 mirror=3
  CHECK(is_observed_path(g, {0, 1, 2}));
  CHECK(is_observed_path(g, {0, 1, 2, 3}));  // trailing mirror accepted
  CHECK(is_observed_path(g, {1, 2}));
  CHECK(is_observed_path(g, {2}));
  CHECK_FALSE(is_observed_path(g, {0, 1}));     // terminal not directly observable
  CHECK_FALSE(is_observed_path(g, {0, 2}));     // C's only in-neighbor is B, not A
  CHECK_FALSE(is_observed_path(g, {}));         // empty
  CHECK_FALSE(is_observed_path(g, {3}));        // a mirror alone is not a path
  CHECK_FALSE(is_observed_path(g, {2, 2}));     // repeated vertex
  CHECK_FALSE(is_observed_path(g, {2, 3, 3}));  // mirror not in terminal position
}

TEST_CASE("observed path rejects interior observable vertices") {
  WiringDigraph g = wire("A = 1\nB = A\nC = B\noutput Y1 = C\noutput Y2 = B\n");
  // B is directly observable, so it cannot sit inside a path ending at C
  CHECK_FALSE(is_observed_path(g, {1, 2}));
  CHECK_FALSE(is_observed_path(g, {0, 1, 2}));
  CHECK(is_observed_path(g, {2}));
  CHECK(is_observed_path(g, {0, 1}));
}

TEST_CASE("observed path needs the unique in-neighbor chain") {
  WiringDigraph g = wire("A = 1\nB = A\nC = B\nD = C & A\noutput Y1 = D\noutput Y2 = B\n");
  CHECK_FALSE(is_observed_path(g, {2, 3}));  // D also reads A
  CHECK(is_observed_path(g, {3}));
}

TEST_CASE("decomposition walks sensors in declaration order") {
  WiringDigraph g = wire("A = 1 ^ B\nB = A\nC = B ^ A\nD = C\noutput Y1 = B\noutput Y2 = D\n");
  auto paths = decompose_into_observed_paths(g);
  REQUIRE(paths.has_value());
  REQUIRE(paths->size() == 2);
  CHECK((*paths)[0] == Path{0, 1, 4});
  CHECK((*paths)[1] == Path{2, 3, 5});
  for (const Path& p : *paths) CHECK(is_observed_path(g, p));
}

TEST_CASE("decomposition failures") {
  // uncovered vertex: C feeds nothing any sensor can reach backward
  CHECK_FALSE(decompose_into_observed_paths(
                  wire("A = B\nB = A\nC = A & B\noutput Y = B\n"))
                  .has_value());
}

TEST_CASE("generic augmentation can make a doubly-sensed state decomposable") {
  // Both sensors read A; the virtual states untangle them: one path walks
  // back through A into B, the other is the second virtual state alone.
  WiringDigraph g = wire("A = B\nB = A\noutput Y1 = A\noutput Y2 = A\n");
  auto paths = decompose_into_observed_paths(g);
  REQUIRE(paths.has_value());
  CHECK((*paths)[0] == Path{1, 0, 2, 4});
  CHECK((*paths)[1] == Path{3, 5});
}

TEST_CASE("self-loop heads stop the backward walk") {
  WiringDigraph g = wire("A = !A\nB = A\noutput Y = B\n");
  auto paths = decompose_into_observed_paths(g);
  REQUIRE(paths.has_value());
  CHECK((*paths)[0] == Path{0, 1, 2});
}

TEST_CASE("necessary-condition violations on the 18-state model") {
  WiringDigraph g = wire(slurp("t_lgl.bn"));
  REQUIRE(g.vertices.size() == 21);  // 18 states + 3 mirrors
  CHECK(g.n_state == 18);
  CHECK(g.n_output == 3);
  // X5, X7, X8, X12, X13, X15 (0-based ids 4, 6, 7, 11, 12, 14)
  CHECK(check_p1(g) == std::vector<std::uint32_t>{4, 6, 7, 11, 12, 14});
  CHECK_FALSE(decompose_into_observed_paths(g).has_value());
}

TEST_CASE("necessary condition can hold while decomposition still fails") {
  WiringDigraph g = wire(slurp("two_pair_cycles.bn"));
  CHECK(check_p1(g).empty());
  CHECK_FALSE(decompose_into_observed_paths(g).has_value());
}

TEST_CASE("DOT export is deterministic and complete") {
  WiringDigraph g = wire(slurp("t_lgl.bn"));
  std::string dot = to_dot(g);
  CHECK(dot == to_dot(g));
  CHECK(contains(dot, "digraph wiring"));
  CHECK(contains(dot, "rankdir=LR"));
  CHECK(contains(dot, "\"X1\""));
  CHECK(contains(dot, "\"Y3\""));
  CHECK(contains(dot, "peripheries=2"));  // directly observable states
  CHECK_FALSE(contains(dot, "color=red"));

  DotOverlay overlay;
  overlay.highlight_edges.push_back({1, 0});  // X2 -> X1
  overlay.vertex_notes.push_back({3, "pin t2 <- X7"});
  std::string marked = to_dot(g, &overlay);
  CHECK(contains(marked, "color=red"));
  CHECK(contains(marked, "pin t2 <- X7"));
}

TEST_CASE("DOT renders inputs distinctly") {
  WiringDigraph g = wire("input U\nA = U\noutput Y = A\n");
  std::string dot = to_dot(g);
  CHECK(contains(dot, "diamond"));
  CHECK(contains(dot, "box"));
  CHECK(contains(dot, "ellipse"));
}
