#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "bellsq/localreal.hpp"
#include "testutil.hpp"

using namespace bellsq;

namespace {

// Every solver answer in this suite must survive its matching verifier.
RealizationResult solve_checked(const BellSquare& bs, double tol = kDefaultLpTol) {
  RealizationResult res = find_local_realization(bs, tol);
  if (res.feasible()) {
    Report r = verify_realization(bs, res.joint(), tol);
    REQUIRE_MESSAGE(r.ok(), r.summary());
  } else {
    Report r = verify_certificate(bs, res.certificate());
    REQUIRE_MESSAGE(r.ok(), r.summary());
  }
  return res;
}

}  // namespace

TEST_CASE("global joint marginals") {
  std::mt19937_64 rng(101);
  GlobalJoint g = testutil::random_global_joint(rng, {2, 3, 2, 4});
  CHECK(validate_global_joint(g).ok());

  FinSpace mq = axis_marginal(g, 0);
  double mass = 0.0;
  for (double p : mq.probs) mass += p;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  JointSpace qs = pair_marginal(g, MeasPair::QS);
  CHECK(validate_joint(qs).ok());
  auto [l, r] = marginals(qs);
  for (std::size_t i = 0; i < l.size(); ++i)
    CHECK(l.probs[i] == doctest::Approx(g.axes[0].probs[i]).epsilon(1e-12));

  CHECK_THROWS_AS(pair_marginal(g, 2, 1), std::invalid_argument);
  CHECK(flatten(g).size() == 2 * 3 * 2 * 4);
}

TEST_CASE("product squares are locally realistic") {
  const FinSpace q{{"q1", "q2"}, {0.3, 0.7}};
  const FinSpace r{{"r1", "r2", "r3"}, {0.2, 0.5, 0.3}};
  const FinSpace s{{"s1", "s2"}, {0.25, 0.75}};
  const FinSpace t{{"t1", "t2"}, {0.5, 0.5}};
  BellSquare bs =
      bell_square_from_joints(product(q, s), product(r, s), product(r, t), product(q, t));
  RealizationResult res = solve_checked(bs);
  REQUIRE(res.feasible());

  // The corner product measure is itself a valid answer.
  GlobalJoint prod = realization_product(bs.q, bs.r, bs.s, bs.t);
  CHECK(verify_realization(bs, prod, 1e-9).ok());
  CHECK(verify_realism_extension(bs, prod).ok());
  CHECK(validate_global_joint(prod).ok());
}

TEST_CASE("deterministic point mass square") {
  const FinSpace q{{"q1", "q2"}, {1.0, 0.0}};
  const FinSpace r{{"r1", "r2"}, {1.0, 0.0}};
  const FinSpace s{{"s1", "s2"}, {1.0, 0.0}};
  const FinSpace t{{"t1", "t2"}, {1.0, 0.0}};
  const std::vector<double> point{1.0, 0.0, 0.0, 0.0};
  BellSquare bs;
  bs.q = q;
  bs.r = r;
  bs.s = s;
  bs.t = t;
  bs.qs = JointSpace{q, s, point};
  bs.rs = JointSpace{r, s, point};
  bs.rt = JointSpace{r, t, point};
  bs.qt = JointSpace{q, t, point};
  RealizationResult res = solve_checked(bs);
  REQUIRE(res.feasible());
  CHECK(res.joint().table[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("singlet statistics admit no local realization") {
  BellSquare bs = testutil::quantum_example_square();
  RealizationResult res = solve_checked(bs);
  REQUIRE_FALSE(res.feasible());
  const InfeasibilityCertificate& c = res.certificate();

  double max_weight = 0.0;
  for (const auto& w : c.weights)
    for (double v : w) max_weight = std::max(max_weight, std::abs(v));
  CHECK(max_weight == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.observed > c.bound + 1e-6);

  SUBCASE("tampered bound fails verification") {
    InfeasibilityCertificate bad = c;
    bad.bound -= 0.5;
    CHECK_FALSE(verify_certificate(bs, bad).ok());
  }
  SUBCASE("zero weights fail verification") {
    InfeasibilityCertificate zero;
    for (std::size_t p = 0; p < 4; ++p) zero.weights[p].assign(4, 0.0);
    CHECK_FALSE(verify_certificate(bs, zero).ok());
  }
  SUBCASE("wrong shape fails verification") {
    InfeasibilityCertificate bad = c;
    bad.weights[2].push_back(0.0);
    CHECK_FALSE(verify_certificate(bs, bad).ok());
  }
}

TEST_CASE("the chsh combination is itself a certificate here") {
  // Weights tau_p * x(a) * y(b) with tau = (+,+,+,-) and x, y the +-1
  // variables score any square at its chsh value; deterministic tuples top
  // out at 2, the singlet statistics reach 2 sqrt(2).
  BellSquare bs = testutil::quantum_example_square();
  InfeasibilityCertificate c;
  const std::array<double, 4> tau{1.0, 1.0, 1.0, -1.0};
  const std::array<double, 2> sign{1.0, -1.0};
  for (std::size_t p = 0; p < 4; ++p) {
    c.weights[p].resize(4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < 2; ++k) c.weights[p][i * 2 + k] = tau[p] * sign[i] * sign[k];
  }
  c.bound = 2.0;
  c.observed = certificate_score(bs, c);
  CHECK(c.observed == doctest::Approx(testutil::kChshMax).epsilon(1e-12));
  CHECK(verify_certificate(bs, c).ok());

  // The same inequality scores the PR box at 4.
  BellSquare pr = testutil::pr_box_square();
  CHECK(certificate_score(pr, c) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("noisy PR box crosses the boundary at one half") {
  for (double v : {0.0, 0.25, 0.5}) {
    CAPTURE(v);
    RealizationResult res = solve_checked(testutil::noisy_pr_square(v));
    CHECK(res.feasible());
  }
  for (double v : {0.6, 0.75, 1.0}) {
    CAPTURE(v);
    RealizationResult res = solve_checked(testutil::noisy_pr_square(v));
    CHECK_FALSE(res.feasible());
  }
}

TEST_CASE("solver rejects invalid squares") {
  BellSquare broken = testutil::quantum_example_square();
  broken.qs.table[0] += 0.2;
  CHECK_THROWS_AS(find_local_realization(broken), std::invalid_argument);
}

TEST_CASE("marginalized global joints are always feasible") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 3);
  for (int iter = 0; iter < 120; ++iter) {
    GlobalJoint g =
        testutil::random_global_joint(rng, {size(rng), size(rng), size(rng), size(rng)});
    BellSquare bs = testutil::square_from_global(g);
    RealizationResult res = solve_checked(bs);
    CHECK(res.feasible());
    // The source joint itself must also verify as an extension.
    CHECK(verify_realization(bs, g, 1e-9).ok());
  }
}

TEST_CASE("locality extension reproduces both inputs") {
  SUBCASE("closed-form singlet inputs") {
    BellSquare bs = testutil::quantum_example_square();
    TripleJoint ext = locality_extension(bs.qs, bs.qt);
    REQUIRE(ext.table.size() == 8);

    // Pair marginals of the extension against the inputs.
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t s = 0; s < 2; ++s) {
        double sum = 0.0;
        for (std::size_t t = 0; t < 2; ++t) sum += ext.table[ext.index(q, s, t)];
        CHECK(sum == doctest::Approx(bs.qs.at(q, s)).epsilon(1e-12));
      }
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t t = 0; t < 2; ++t) {
        double sum = 0.0;
        for (std::size_t s = 0; s < 2; ++s) sum += ext.table[ext.index(q, s, t)];
        CHECK(sum == doctest::Approx(bs.qt.at(q, t)).epsilon(1e-12));
      }

    Diagram d = locality_extension_diagram(ext, bs.qs, bs.qt);
    CHECK(validate_diagram(d, 1e-9).ok());
    CHECK(check_commutes(d).commutes);
  }

  SUBCASE("random couplings with a shared left marginal") {
    std::mt19937_64 rng(77);
    std::exponential_distribution<double> exp1(1.0);
    for (int iter = 0; iter < 100; ++iter) {
      FinSpace shared = testutil::random_space(rng, 2, 4, "x");
      auto conditional = [&](const FinSpace& right) {
        JointSpace j;
        j.left = shared;
        j.right = right;
        j.table.assign(shared.size() * right.size(), 0.0);
        for (std::size_t i = 0; i < shared.size(); ++i) {
          double mass = 0.0;
          std::vector<double> row(right.size());
          for (double& v : row) mass += (v = exp1(rng));
          for (std::size_t k = 0; k < right.size(); ++k)
            j.at(i, k) = shared.probs[i] * row[k] / mass;
        }
        auto [l, r] = marginals(j);
        j.left.probs = l.probs;
        j.right.probs = r.probs;
        return j;
      };
      JointSpace ja = conditional(testutil::random_space(rng, 2, 4, "a"));
      JointSpace jb = conditional(testutil::random_space(rng, 2, 4, "b"));
      TripleJoint ext = locality_extension(ja, jb);
      Diagram d = locality_extension_diagram(ext, ja, jb);
      Report r = validate_diagram(d, 1e-9);
      REQUIRE_MESSAGE(r.ok(), r.summary());
      CHECK(check_commutes(d).commutes);
    }
  }

  SUBCASE("zero-mass shared outcome stays zero") {
    FinSpace shared{{"x1", "x2"}, {1.0, 0.0}};
    FinSpace right{{"a1", "a2"}, {0.5, 0.5}};
    JointSpace j{shared, right, {0.5, 0.5, 0.0, 0.0}};
    TripleJoint ext = locality_extension(j, j);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) CHECK(ext.table[ext.index(1, a, b)] == 0.0);
  }

  SUBCASE("mismatched shared marginal throws") {
    FinSpace shared{{"x1", "x2"}, {0.5, 0.5}};
    FinSpace other{{"x1", "x2"}, {0.3, 0.7}};
    FinSpace right{{"a1", "a2"}, {0.5, 0.5}};
    CHECK_THROWS_AS(locality_extension(product(shared, right), product(other, right)),
                    std::invalid_argument);
  }
}

TEST_CASE("realism alone allows any corner product") {
  BellSquare bs = testutil::quantum_example_square();
  GlobalJoint prod = realization_product(bs.q, bs.r, bs.s, bs.t);
  CHECK(validate_global_joint(prod).ok());
  CHECK(verify_realism_extension(bs, prod).ok());

  // But the product's pairwise statistics are nowhere near the square's.
  JointSpace qs = pair_marginal(prod, MeasPair::QS);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    worst = std::max(worst, std::abs(qs.table[i] - bs.qs.table[i]));
  CHECK(worst > 0.1);
  // And so verify_realization must reject it.
  CHECK_FALSE(verify_realization(bs, prod, 1e-7).ok());
}
