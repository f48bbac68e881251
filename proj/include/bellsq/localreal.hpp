#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "bellsq/diagram.hpp"
#include "bellsq/finprob.hpp"

namespace bellsq {

// Default feasibility threshold for the realization solver. Looser than the
// validation tolerance because simplex arithmetic accumulates error.
inline constexpr double kDefaultLpTol = 1e-7;

// A distribution on the product of the four corner outcome sets, in axis
// order Q, R, S, T. Index layout is row-major over (q, r, s, t).
struct GlobalJoint {
  std::array<FinSpace, 4> axes;
  std::vector<double> table;

  std::size_t size(std::size_t axis) const { return axes[axis].size(); }
  std::size_t cells() const;
  std::size_t index(std::size_t q, std::size_t r, std::size_t s, std::size_t t) const;
};

Report validate_global_joint(const GlobalJoint& g, double tol = kDefaultTol);

FinSpace axis_marginal(const GlobalJoint& g, std::size_t axis);
// Marginal onto two axes (a < b), as a joint table.
JointSpace pair_marginal(const GlobalJoint& g, std::size_t axis_a, std::size_t axis_b);
JointSpace pair_marginal(const GlobalJoint& g, MeasPair p);

// The product space viewed as a plain probability space on tuple labels.
FinSpace flatten(const GlobalJoint& g);

// A machine-checkable Bell inequality: weights on the cells of the four
// joint tables such that every deterministic outcome tuple scores at most
// `bound`, while the given statistics score `observed` > bound. Existence of
// such weights certifies that no common extension reproduces the square.
struct InfeasibilityCertificate {
  std::array<std::vector<double>, 4> weights;  // per pair (QS,RS,RT,QT), row-major
  double bound = 0.0;
  double observed = 0.0;
};

struct RealizationResult {
  std::variant<GlobalJoint, InfeasibilityCertificate> value;

  bool feasible() const { return std::holds_alternative<GlobalJoint>(value); }
  const GlobalJoint& joint() const { return std::get<GlobalJoint>(value); }
  const InfeasibilityCertificate& certificate() const {
    return std::get<InfeasibilityCertificate>(value);
  }
};

// Decides whether the square admits a locally realistic description, i.e. a
// common extension of the four joints on the canonical product sample space
// Q x R x S x T. Runs a phase-1 simplex on {pairwise marginals = given
// joints, entries >= 0}; feasible iff the optimum is <= tol. On the
// infeasible side the phase-1 multipliers are normalized to max |weight| = 1
// and re-verified before being returned. Throws on a non-validating square;
// throws NumericalFailure if the simplex stalls or the certificate does not
// survive its own verification.
RealizationResult find_local_realization(const BellSquare& bs, double tol = kDefaultLpTol);

// Checks that g really is a common extension: builds the full diagram
// (extension -> each joint -> each corner, canonical projections), checks
// every edge's extension condition within tol and path commutativity.
Report verify_realization(const BellSquare& bs, const GlobalJoint& g, double tol = kDefaultLpTol);

// Checks both certificate invariants by exhaustive enumeration of the
// deterministic outcome tuples.
Report verify_certificate(const BellSquare& bs, const InfeasibilityCertificate& c,
                          double tol = kDefaultTol);

// The certificate's score of an arbitrary square's statistics.
double certificate_score(const BellSquare& bs, const InfeasibilityCertificate& c);

// A distribution on (shared, A, B) where both inputs share their left space.
struct TripleJoint {
  std::array<FinSpace, 3> axes;
  std::vector<double> table;  // row-major over (shared, a, b)

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * axes[1].size() + j) * axes[2].size() + k;
  }
};

FinSpace flatten(const TripleJoint& t);

// The locality-only extension of two joints sharing their left marginal:
// the conditional-product coupling  mu(x,a,b) = ja(x,a) * jb(x,b) / mu(x),
// zero on slices where the shared outcome has no mass. Its two pair
// marginals reproduce the inputs. Symmetric in the roles of the corners, so
// the same operation serves all four of them. Throws when the shared
// marginals disagree beyond tol.
TripleJoint locality_extension(const JointSpace& ja, const JointSpace& jb,
                               double tol = kDefaultTol);

// The commuting square witnessing locality for one fixed corner: extension
// over both joints, both joints over the shared corner.
Diagram locality_extension_diagram(const TripleJoint& ext, const JointSpace& ja,
                                   const JointSpace& jb);

// The realism-only witness: the product measure of the four corners. Every
// single-axis marginal equals the corresponding corner by construction.
GlobalJoint realization_product(const FinSpace& cq, const FinSpace& cr, const FinSpace& cs,
                                const FinSpace& ct);

// Checks that g extends the four corner spaces (single-axis marginals match
// within tol) - the realism-only half, which says nothing about the joints.
Report verify_realism_extension(const BellSquare& bs, const GlobalJoint& g,
                                double tol = kDefaultTol);

}  // namespace bellsq
