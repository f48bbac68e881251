// Writes the shipped example squares: a product square, the PR box, and a
// deterministic point-mass square. The quantum example comes from the CLI's
// quantum subcommand instead, so every file is produced by library code.

#include <iostream>
#include <string>

#include "bellsq/diagram.hpp"
#include "bellsq/io.hpp"

namespace {

using namespace bellsq;

FinSpace corner(const char* a, const char* b, double pa) {
  return FinSpace{{a, b}, {pa, 1.0 - pa}};
}

JointSpace table(const FinSpace& left, const FinSpace& right, std::array<double, 4> cells) {
  JointSpace j;
  j.left = left;
  j.right = right;
  j.table.assign(cells.begin(), cells.end());
  auto [l, r] = marginals(j);
  j.left.probs = l.probs;
  j.right.probs = r.probs;
  return j;
}

BellSquareDoc product_square() {
  const FinSpace q = corner("q1", "q2", 0.3);
  const FinSpace r = corner("r1", "r2", 0.6);
  const FinSpace s = corner("s1", "s2", 0.25);
  const FinSpace t = corner("t1", "t2", 0.5);
  BellSquareDoc doc;
  doc.square = bell_square_from_joints(product(q, s), product(r, s), product(r, t), product(q, t));
  return doc;
}

BellSquareDoc pr_box_square() {
  const FinSpace q = corner("q1", "q2", 0.5);
  const FinSpace r = corner("r1", "r2", 0.5);
  const FinSpace s = corner("s1", "s2", 0.5);
  const FinSpace t = corner("t1", "t2", 0.5);
  BellSquareDoc doc;
  doc.square = bell_square_from_joints(table(q, s, {0.5, 0.0, 0.0, 0.5}),
                                       table(r, s, {0.5, 0.0, 0.0, 0.5}),
                                       table(r, t, {0.5, 0.0, 0.0, 0.5}),
                                       table(q, t, {0.0, 0.5, 0.5, 0.0}));
  CornerRvs rvs;
  for (auto& v : rvs.values) v = {1.0, -1.0};
  doc.rvs = rvs;
  return doc;
}

BellSquareDoc deterministic_square() {
  const FinSpace q = corner("q1", "q2", 1.0);
  const FinSpace r = corner("r1", "r2", 1.0);
  const FinSpace s = corner("s1", "s2", 1.0);
  const FinSpace t = corner("t1", "t2", 1.0);
  const std::array<double, 4> point{1.0, 0.0, 0.0, 0.0};
  BellSquareDoc doc;
  doc.square = bell_square_from_joints(table(q, s, point), table(r, s, point),
                                       table(r, t, point), table(q, t, point));
  CornerRvs rvs;
  for (auto& v : rvs.values) v = {1.0, -1.0};
  doc.rvs = rvs;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_examples OUTDIR\n";
    return 2;
  }
  const std::string dir = argv[1];
  try {
    save_bell_square(product_square(), dir + "/product.json");
    save_bell_square(pr_box_square(), dir + "/pr_box.json");
    save_bell_square(deterministic_square(), dir + "/deterministic.json");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote product.json pr_box.json deterministic.json to " << dir << "\n";
  return 0;
}
