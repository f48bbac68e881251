#include <doctest.h>

#include <cstdio>
#include <string>

#include "bellsq/io.hpp"
#include "testutil.hpp"

using namespace bellsq;

namespace {

BellSquareDoc sample_doc(bool with_rvs) {
  BellSquareDoc doc;
  doc.square = testutil::quantum_example_square();
  if (with_rvs) {
    CornerRvs rvs;
    for (auto& v : rvs.values) v = {1.0, -1.0};
    doc.rvs = rvs;
  }
  return doc;
}

bool squares_identical(const BellSquare& a, const BellSquare& b) {
  auto space_eq = [](const FinSpace& x, const FinSpace& y) {
    return x.labels == y.labels && x.probs == y.probs;  // bitwise, no tolerance
  };
  auto joint_eq = [&](const JointSpace& x, const JointSpace& y) {
    return space_eq(x.left, y.left) && space_eq(x.right, y.right) && x.table == y.table;
  };
  return space_eq(a.q, b.q) && space_eq(a.r, b.r) && space_eq(a.s, b.s) && space_eq(a.t, b.t) &&
         joint_eq(a.qs, b.qs) && joint_eq(a.rs, b.rs) && joint_eq(a.rt, b.rt) &&
         joint_eq(a.qt, b.qt);
}

}  // namespace

TEST_CASE("serialize/parse round trip is bit-stable") {
  for (bool with_rvs : {false, true}) {
    CAPTURE(with_rvs);
    const BellSquareDoc doc = sample_doc(with_rvs);
    const std::string text = serialize_bell_square(doc);
    const BellSquareDoc back = parse_bell_square(text);
    CHECK(squares_identical(doc.square, back.square));
    CHECK(back.rvs.has_value() == with_rvs);
    if (with_rvs) {
      for (std::size_t i = 0; i < 4; ++i) CHECK(back.rvs->values[i] == doc.rvs->values[i]);
    }
    // A second pass changes nothing, character for character.
    CHECK(serialize_bell_square(back) == text);
  }
}

TEST_CASE("round trip survives awkward doubles") {
  BellSquareDoc doc;
  FinSpace q{{"q1", "q2"}, {1.0 / 3.0, 2.0 / 3.0}};
  FinSpace r{{"r1", "r2"}, {1e-17, 1.0 - 1e-17}};
  FinSpace s{{"s1", "s2"}, {0.1, 0.9}};
  FinSpace t{{"t1", "t2"}, {0.5, 0.5}};
  doc.square = bell_square_from_joints(product(q, s), product(r, s), product(r, t),
                                       product(q, t));
  const BellSquareDoc back = parse_bell_square(serialize_bell_square(doc));
  CHECK(squares_identical(doc.square, back.square));
}

TEST_CASE("parse rejects malformed documents") {
  const std::string good = serialize_bell_square(sample_doc(true));

  CHECK_THROWS_AS(parse_bell_square(good.substr(0, good.size() / 2)), std::runtime_error);
  CHECK_THROWS_AS(parse_bell_square("[]"), std::runtime_error);
  CHECK_THROWS_AS(parse_bell_square("{\"corners\": {}}"), std::runtime_error);

  SUBCASE("missing corner") {
    std::string text = good;
    const auto pos = text.find("\"R\"");
    text.replace(pos, 3, "\"Z\"");
    CHECK_THROWS_AS(parse_bell_square(text), std::runtime_error);
  }
  SUBCASE("ragged joint row") {
    std::string text =
        "{\"corners\":{\"Q\":{\"labels\":[\"a\",\"b\"],\"probs\":[0.5,0.5]},"
        "\"R\":{\"labels\":[\"a\",\"b\"],\"probs\":[0.5,0.5]},"
        "\"S\":{\"labels\":[\"a\",\"b\"],\"probs\":[0.5,0.5]},"
        "\"T\":{\"labels\":[\"a\",\"b\"],\"probs\":[0.5,0.5]}},"
        "\"joints\":{\"QS\":[[0.5,0.0],[0.0]],"
        "\"RS\":[[0.25,0.25],[0.25,0.25]],"
        "\"RT\":[[0.25,0.25],[0.25,0.25]],"
        "\"QT\":[[0.25,0.25],[0.25,0.25]]}}";
    CHECK_THROWS_AS(parse_bell_square(text), std::runtime_error);
  }
  SUBCASE("rvs must be exactly +-1") {
    std::string text = good;
    const auto pos = text.find("\"rvs\"");
    REQUIRE(pos != std::string::npos);
    const auto one = text.find("1", pos);
    text.replace(one, 1, "2");
    CHECK_THROWS_AS(parse_bell_square(text), std::runtime_error);
  }
}

TEST_CASE("file round trip") {
  const std::string path = "io_test_square.json";
  const BellSquareDoc doc = sample_doc(true);
  save_bell_square(doc, path);
  const BellSquareDoc back = load_bell_square(path);
  CHECK(squares_identical(doc.square, back.square));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_bell_square("definitely_missing_file.json"), std::runtime_error);
}

TEST_CASE("density file loading") {
  const std::string path = "io_test_density.json";
  write_text_file(path,
                  "{\"rho\": ["
                  "[[0,0],[0,0],[0,0],[0,0]],"
                  "[[0,0],[0.5,0],[-0.5,0],[0,0]],"
                  "[[0,0],[-0.5,0],[0.5,0],[0,0]],"
                  "[[0,0],[0,0],[0,0],[0,0]]]}");
  const DensityMatrix rho = load_density(path);
  CHECK(max_abs_diff(rho.rho, epr_state().rho) == 0.0);
  std::remove(path.c_str());

  const std::string bad = "io_test_density_bad.json";
  write_text_file(bad, "{\"rho\": [[1,2],[3,4]]}");
  CHECK_THROWS_AS(load_density(bad), std::runtime_error);
  std::remove(bad.c_str());

  const std::string invalid = "io_test_density_invalid.json";
  write_text_file(invalid,
                  "{\"rho\": ["
                  "[[1.5,0],[0,0],[0,0],[0,0]],"
                  "[[0,0],[-0.5,0],[0,0],[0,0]],"
                  "[[0,0],[0,0],[0,0],[0,0]],"
                  "[[0,0],[0,0],[0,0],[0,0]]]}");
  CHECK_THROWS_AS(load_density(invalid), std::invalid_argument);
  std::remove(invalid.c_str());
}
