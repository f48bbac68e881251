#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bellsq/finprob.hpp"

namespace bellsq {

// A directed multigraph with probability spaces at the nodes and
// claimed-probability-preserving maps on the edges. Parallel edges between
// the same pair of nodes are allowed.
struct Diagram {
  struct Edge {
    std::string from;
    std::string to;
    ProbMap map;
  };

  std::map<std::string, FinSpace> nodes;
  std::vector<Edge> edges;

  void add_node(std::string id, FinSpace space);  // throws on duplicate id
  // Endpoints must exist and the map's source/target must match their spaces
  // label-for-label (probabilities compared at kDefaultTol).
  void add_edge(const std::string& from, const std::string& to, ProbMap map);
};

// Edge endpoint/space consistency plus the extension condition per edge.
Report validate_diagram(const Diagram& d, double tol = kDefaultTol);

// One pair of parallel paths whose composed outcome functions disagree.
struct PathPairFailure {
  std::string from;
  std::string to;
  std::vector<std::size_t> path_a;  // edge indices, in traversal order
  std::vector<std::size_t> path_b;
  std::string witness;   // outcome of `from` on which the composites differ
  std::string value_a;   // its two images in `to`
  std::string value_b;
};

struct CommutesReport {
  bool commutes = true;
  std::vector<PathPairFailure> failures;
};

// Enumerates all pairs of distinct directed paths (at most max_path_len
// edges) sharing both endpoints and compares the composed outcome functions
// pointwise. Function-level comparison is exact; tol only governs the
// precondition that the diagram validates. Throws on cyclic diagrams.
CommutesReport check_commutes(const Diagram& d, std::size_t max_path_len = 4,
                              double tol = kDefaultTol);

std::string describe_path(const Diagram& d, const std::vector<std::size_t>& path);

// Which of the four measurement pairs a joint table belongs to. The order
// is fixed everywhere: QS, RS, RT, QT.
enum class MeasPair : std::size_t { QS = 0, RS = 1, RT = 2, QT = 3 };
inline constexpr std::array<const char*, 4> kPairNames{"QS", "RS", "RT", "QT"};

// Four corner spaces and the four pairwise joint tables a theory assigns to
// a two-party scenario with measurement choices Q/R on one side and S/T on
// the other.
struct BellSquare {
  FinSpace q, r, s, t;
  JointSpace qs, rs, rt, qt;

  const JointSpace& joint(MeasPair p) const;
  const FinSpace& corner_left(MeasPair p) const;   // Q or R
  const FinSpace& corner_right(MeasPair p) const;  // S or T
};

// Assembles a square from the four joints alone; corners are the joints'
// computed marginals (QS supplies Q and S, RT supplies R and T).
BellSquare bell_square_from_joints(JointSpace qs, JointSpace rs, JointSpace rt, JointSpace qt);

// Every joint must be a genuine joint distribution whose marginals agree
// with the corner spaces; that is exactly the statement that the eight
// projection arrows of the square are probability preserving.
Report validate_bell_square(const BellSquare& bs, double tol = kDefaultTol);

// The square as an explicit 8-node, 8-edge diagram with the canonical
// projections.
Diagram bell_square_as_diagram(const BellSquare& bs);

}  // namespace bellsq
