#include <doctest.h>

#include <string>

#include "bellsq/diagram.hpp"
#include "testutil.hpp"

using namespace bellsq;

namespace {

// Four-outcome source quotiented two ways, both onto a common point: the
// smallest genuinely commuting square.
Diagram quotient_square() {
  FinSpace src = uniform_space("x", 4);
  FinSpace halves{{"lo", "hi"}, {0.5, 0.5}};
  FinSpace parity{{"even", "odd"}, {0.5, 0.5}};
  FinSpace point{{"*"}, {1.0}};

  Diagram d;
  d.add_node("A", src);
  d.add_node("B", halves);
  d.add_node("C", parity);
  d.add_node("D", point);
  d.add_edge("A", "B", make_prob_map(src, halves, [](const std::string& l) {
               return l[1] <= '2' ? "lo" : "hi";
             }));
  d.add_edge("A", "C", make_prob_map(src, parity, [](const std::string& l) {
               return (l[1] - '0') % 2 == 0 ? "even" : "odd";
             }));
  d.add_edge("B", "D", make_prob_map(halves, point, [](const std::string&) { return "*"; }));
  d.add_edge("C", "D", make_prob_map(parity, point, [](const std::string&) { return "*"; }));
  return d;
}

}  // namespace

TEST_CASE("diagram construction guards") {
  Diagram d;
  d.add_node("A", uniform_space("x", 2));
  CHECK_THROWS_AS(d.add_node("A", uniform_space("y", 2)), std::invalid_argument);

  FinSpace a = uniform_space("x", 2);
  CHECK_THROWS_AS(d.add_edge("A", "missing", identity_map(a)), std::invalid_argument);

  d.add_node("B", uniform_space("y", 3));
  CHECK_THROWS_AS(d.add_edge("A", "B", identity_map(a)), std::invalid_argument);
}

TEST_CASE("validate_diagram flags non-preserving edges") {
  Diagram d = quotient_square();
  CHECK(validate_diagram(d).ok());

  // Corrupt one edge's claimed target distribution via a fresh diagram.
  Diagram bad;
  FinSpace src = uniform_space("x", 4);
  FinSpace skew{{"lo", "hi"}, {0.9, 0.1}};
  bad.add_node("A", src);
  bad.add_node("B", skew);
  ProbMap m;
  m.source = src;
  m.target = skew;
  m.table = {0, 0, 1, 1};
  bad.add_edge("A", "B", std::move(m));
  Report r = validate_diagram(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(r.errors[0].find("pushforward") != std::string::npos);
}

TEST_CASE("check_commutes accepts the quotient square") {
  CommutesReport cr = check_commutes(quotient_square());
  CHECK(cr.commutes);
  CHECK(cr.failures.empty());
}

TEST_CASE("check_commutes finds a witness for parallel unequal maps") {
  FinSpace s = uniform_space("x", 2);
  Diagram d;
  d.add_node("A", s);
  d.add_node("B", s);
  d.add_edge("A", "B", identity_map(s));
  ProbMap swap;
  swap.source = s;
  swap.target = s;
  swap.table = {1, 0};
  d.add_edge("A", "B", std::move(swap));

  CommutesReport cr = check_commutes(d);
  REQUIRE_FALSE(cr.commutes);
  REQUIRE_FALSE(cr.failures.empty());
  const PathPairFailure& f = cr.failures[0];
  CHECK(f.from == "A");
  CHECK(f.to == "B");
  CHECK(f.witness == "x1");
  CHECK(f.value_a != f.value_b);
  CHECK_FALSE(describe_path(d, f.path_a).empty());
}

TEST_CASE("check_commutes rejects cycles and invalid diagrams") {
  FinSpace s = uniform_space("x", 2);
  Diagram cyclic;
  cyclic.add_node("A", s);
  cyclic.add_node("B", s);
  cyclic.add_edge("A", "B", identity_map(s));
  cyclic.add_edge("B", "A", identity_map(s));
  CHECK_THROWS_AS(check_commutes(cyclic), std::invalid_argument);

  Diagram invalid;
  invalid.add_node("A", s);
  invalid.add_node("B", FinSpace{{"x1", "x2"}, {0.75, 0.25}});
  ProbMap m;
  m.source = s;
  m.target = FinSpace{{"x1", "x2"}, {0.75, 0.25}};
  m.table = {0, 1};
  invalid.add_edge("A", "B", std::move(m));
  CHECK_THROWS_AS(check_commutes(invalid), std::invalid_argument);
}

TEST_CASE("bell square validation") {
  BellSquare bs = testutil::quantum_example_square();
  CHECK(validate_bell_square(bs).ok());

  SUBCASE("perturbed joint breaks a marginal") {
    BellSquare broken = bs;
    broken.qs.table[0] += 1e-3;
    broken.qs.table[1] -= 1e-3;
    Report r = validate_bell_square(broken);
    REQUIRE_FALSE(r.ok());
    CHECK(r.summary().find("QS") != std::string::npos);
  }

  SUBCASE("label mismatch between joint and corner") {
    BellSquare broken = bs;
    broken.s.labels = {"s1", "sX"};
    Report r = validate_bell_square(broken);
    CHECK_FALSE(r.ok());
  }

  SUBCASE("PR box and deterministic squares are valid too") {
    CHECK(validate_bell_square(testutil::pr_box_square()).ok());
    CHECK(validate_bell_square(testutil::noisy_pr_square(0.3)).ok());
  }
}

TEST_CASE("bell_square_from_joints derives consistent corners") {
  BellSquare src = testutil::quantum_example_square();
  BellSquare bs = bell_square_from_joints(src.qs, src.rs, src.rt, src.qt);
  CHECK(validate_bell_square(bs).ok());
  CHECK(bs.q.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(same_labels(bs.qs.left, bs.qt.left));

  JointSpace alien = src.rs;
  alien.right.labels = {"z1", "z2"};
  CHECK_THROWS_AS(bell_square_from_joints(src.qs, alien, src.rt, src.qt), std::invalid_argument);
}

TEST_CASE("bell square as an explicit diagram") {
  BellSquare bs = testutil::quantum_example_square();
  Diagram d = bell_square_as_diagram(bs);
  CHECK(d.nodes.size() == 8);
  CHECK(d.edges.size() == 8);
  CHECK(validate_diagram(d).ok());
  CHECK(check_commutes(d).commutes);
}
