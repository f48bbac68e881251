#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bellsq {

// Absolute tolerance used by every invariant check unless the caller
// overrides it.
inline constexpr double kDefaultTol = 1e-9;

// Thrown when an iterative method cannot produce an answer it can vouch for
// (iteration cap hit, certificate that fails its own re-verification, ...).
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outcome of a report-style validation. Errors fail the check; warnings
// (small negative entries snapped to zero, ...) do not.
struct Report {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  void error(std::string msg) { errors.push_back(std::move(msg)); }
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
  void merge(const Report& other, const std::string& prefix);
  std::string summary() const;
};

// A finite outcome set with a probability for each outcome. Labels are
// opaque strings; all tables elsewhere are indexed positionally in label
// order, which makes serialization canonical.
struct FinSpace {
  std::vector<std::string> labels;
  std::vector<double> probs;

  std::size_t size() const { return labels.size(); }
  std::size_t index_of(const std::string& label) const;  // throws if absent
};

bool same_labels(const FinSpace& a, const FinSpace& b);
bool approx_equal(const FinSpace& a, const FinSpace& b, double tol = kDefaultTol);

// Uniform distribution on labels name1..nameN.
FinSpace uniform_space(const std::string& prefix, std::size_t n);

Report validate_space(const FinSpace& s, double tol = kDefaultTol);

// Entries in [-tol, 0) snapped to zero; everything else untouched.
std::vector<double> clamp_small_negatives(std::vector<double> v, double tol = kDefaultTol);

// A function between outcome sets, claimed to be probability preserving.
// table[i] is the target index of source outcome i; totality is structural.
struct ProbMap {
  FinSpace source;
  FinSpace target;
  std::vector<std::size_t> table;
};

// Builds a ProbMap from a label-level function. Throws if the function
// leaves a source label unmapped or maps one outside the target.
ProbMap make_prob_map(FinSpace source, FinSpace target,
                      const std::function<std::string(const std::string&)>& f);

// Distribution induced on the target outcomes: each target outcome gets the
// summed mass of its fiber. Satisfies the extension condition by construction.
FinSpace pushforward(const ProbMap& f);
FinSpace pushforward(const std::vector<std::size_t>& f, const FinSpace& s,
                     std::vector<std::string> target_labels);

// Does f's target distribution agree with the pushforward of its source?
bool is_morphism(const ProbMap& f, double tol = kDefaultTol);

ProbMap compose(const ProbMap& f, const ProbMap& g);  // g after f
ProbMap identity_map(const FinSpace& s);

// A distribution on the product of two outcome sets, stored row-major with
// rows indexed by the left space.
struct JointSpace {
  FinSpace left;
  FinSpace right;
  std::vector<double> table;

  double at(std::size_t i, std::size_t j) const { return table[i * right.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return table[i * right.size() + j]; }
};

Report validate_joint(const JointSpace& j, double tol = kDefaultTol);

// Row sums and column sums of the table.
std::pair<FinSpace, FinSpace> marginals(const JointSpace& j);

JointSpace product(const FinSpace& a, const FinSpace& b);

// Label "(a,b)" for the pair outcome.
std::string pair_label(const std::string& a, const std::string& b);

// The joint viewed as a plain probability space on pair labels; index order
// matches the row-major table.
FinSpace flatten(const JointSpace& j);

// Projections from the flattened joint onto its two factors.
ProbMap left_projection(const JointSpace& j);
ProbMap right_projection(const JointSpace& j);

// A real value for each outcome of a space.
struct RandomVar {
  FinSpace space;
  std::vector<double> values;
};

double expectation(const RandomVar& x);

// Precomposition with a morphism; preserves expectation.
RandomVar pullback(const ProbMap& h, const RandomVar& x);

}  // namespace bellsq
