#include "bellsq/finprob.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace bellsq {

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& e : other.errors) errors.push_back(prefix + e);
  for (const auto& w : other.warnings) warnings.push_back(prefix + w);
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& e : errors) os << "error: " << e << "\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::size_t FinSpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw std::invalid_argument("no outcome labeled '" + label + "'");
}

bool same_labels(const FinSpace& a, const FinSpace& b) {
  return a.labels == b.labels;
}

bool approx_equal(const FinSpace& a, const FinSpace& b, double tol) {
  if (!same_labels(a, b)) return false;
  for (std::size_t i = 0; i < a.probs.size(); ++i)
    if (std::abs(a.probs[i] - b.probs[i]) > tol) return false;
  return true;
}

FinSpace uniform_space(const std::string& prefix, std::size_t n) {
  FinSpace s;
  for (std::size_t i = 0; i < n; ++i) s.labels.push_back(prefix + std::to_string(i + 1));
  s.probs.assign(n, 1.0 / static_cast<double>(n));
  return s;
}

namespace {

// Shared mass/range checks for any probability vector.
void check_prob_vector(const std::vector<double>& p, double tol, Report& r,
                       const std::string& what) {
  double mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    mass += p[i];
    if (p[i] < -tol)
      r.error(what + "[" + std::to_string(i) + "] = " + std::to_string(p[i]) + " < 0");
    else if (p[i] < 0.0)
      r.warn(what + "[" + std::to_string(i) + "] in [-tol,0), clamped to 0");
    if (p[i] > 1.0 + tol)
      r.error(what + "[" + std::to_string(i) + "] = " + std::to_string(p[i]) + " > 1");
  }
  if (std::abs(mass - 1.0) > tol) {
    std::ostringstream os;
    os << what << " mass " << mass << " != 1";
    r.error(os.str());
  }
}

}  // namespace

Report validate_space(const FinSpace& s, double tol) {
  Report r;
  if (s.labels.empty()) r.error("space has no outcomes");
  if (s.labels.size() != s.probs.size())
    r.error("label/prob length mismatch: " + std::to_string(s.labels.size()) + " vs " +
            std::to_string(s.probs.size()));
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < s.labels.size(); ++i)
    if (!seen.insert(s.labels[i]).second)
      r.error("duplicate label '" + s.labels[i] + "' at index " + std::to_string(i));
  if (s.labels.size() == s.probs.size()) check_prob_vector(s.probs, tol, r, "prob");
  return r;
}

std::vector<double> clamp_small_negatives(std::vector<double> v, double tol) {
  for (double& x : v)
    if (x < 0.0 && x >= -tol) x = 0.0;
  return v;
}

ProbMap make_prob_map(FinSpace source, FinSpace target,
                      const std::function<std::string(const std::string&)>& f) {
  ProbMap m;
  m.table.reserve(source.size());
  for (const auto& label : source.labels) {
    std::string image = f(label);
    m.table.push_back(target.index_of(image));  // throws on unmapped label
  }
  m.source = std::move(source);
  m.target = std::move(target);
  return m;
}

FinSpace pushforward(const std::vector<std::size_t>& f, const FinSpace& s,
                     std::vector<std::string> target_labels) {
  if (f.size() != s.size()) throw std::invalid_argument("map not total on source outcomes");
  FinSpace out;
  out.probs.assign(target_labels.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= target_labels.size())
      throw std::invalid_argument("outcome " + s.labels[i] + " maps outside the target");
    out.probs[f[i]] += s.probs[i];
  }
  out.labels = std::move(target_labels);
  return out;
}

FinSpace pushforward(const ProbMap& f) {
  return pushforward(f.table, f.source, f.target.labels);
}

bool is_morphism(const ProbMap& f, double tol) {
  return approx_equal(pushforward(f), f.target, tol);
}

ProbMap compose(const ProbMap& f, const ProbMap& g) {
  if (!same_labels(f.target, g.source))
    throw std::invalid_argument("compose: inner spaces do not match");
  ProbMap h;
  h.source = f.source;
  h.target = g.target;
  h.table.reserve(f.table.size());
  for (std::size_t i : f.table) h.table.push_back(g.table[i]);
  return h;
}

ProbMap identity_map(const FinSpace& s) {
  ProbMap m;
  m.source = s;
  m.target = s;
  m.table.resize(s.size());
  std::iota(m.table.begin(), m.table.end(), std::size_t{0});
  return m;
}

Report validate_joint(const JointSpace& j, double tol) {
  Report r;
  r.merge(validate_space(j.left, tol), "left: ");
  r.merge(validate_space(j.right, tol), "right: ");
  const std::size_t n = j.left.size(), m = j.right.size();
  if (j.table.size() != n * m) {
    r.error("table size " + std::to_string(j.table.size()) + " != " + std::to_string(n * m));
    return r;
  }
  check_prob_vector(j.table, tol, r, "cell");
  auto [ml, mr] = marginals(j);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(ml.probs[i] - j.left.probs[i]) > tol) {
      std::ostringstream os;
      os << "row sum at '" << j.left.labels[i] << "' is " << ml.probs[i] << ", expected "
         << j.left.probs[i];
      r.error(os.str());
    }
  for (std::size_t k = 0; k < m; ++k)
    if (std::abs(mr.probs[k] - j.right.probs[k]) > tol) {
      std::ostringstream os;
      os << "column sum at '" << j.right.labels[k] << "' is " << mr.probs[k] << ", expected "
         << j.right.probs[k];
      r.error(os.str());
    }
  return r;
}

std::pair<FinSpace, FinSpace> marginals(const JointSpace& j) {
  const std::size_t n = j.left.size(), m = j.right.size();
  FinSpace l{j.left.labels, std::vector<double>(n, 0.0)};
  FinSpace r{j.right.labels, std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      l.probs[i] += j.at(i, k);
      r.probs[k] += j.at(i, k);
    }
  return {std::move(l), std::move(r)};
}

JointSpace product(const FinSpace& a, const FinSpace& b) {
  JointSpace j{a, b, std::vector<double>(a.size() * b.size())};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) j.at(i, k) = a.probs[i] * b.probs[k];
  return j;
}

std::string pair_label(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

FinSpace flatten(const JointSpace& j) {
  FinSpace s;
  s.labels.reserve(j.table.size());
  for (const auto& a : j.left.labels)
    for (const auto& b : j.right.labels) s.labels.push_back(pair_label(a, b));
  s.probs = j.table;
  return s;
}

ProbMap left_projection(const JointSpace& j) {
  ProbMap m;
  m.source = flatten(j);
  m.target = j.left;
  m.table.reserve(j.table.size());
  for (std::size_t i = 0; i < j.left.size(); ++i)
    for (std::size_t k = 0; k < j.right.size(); ++k) m.table.push_back(i);
  return m;
}

ProbMap right_projection(const JointSpace& j) {
  ProbMap m;
  m.source = flatten(j);
  m.target = j.right;
  m.table.reserve(j.table.size());
  for (std::size_t i = 0; i < j.left.size(); ++i)
    for (std::size_t k = 0; k < j.right.size(); ++k) m.table.push_back(k);
  return m;
}

double expectation(const RandomVar& x) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) e += x.values[i] * x.space.probs[i];
  return e;
}

RandomVar pullback(const ProbMap& h, const RandomVar& x) {
  if (!same_labels(h.target, x.space))
    throw std::invalid_argument("pullback: variable not defined on the map's target");
  RandomVar out;
  out.space = h.source;
  out.values.reserve(h.table.size());
  for (std::size_t i : h.table) out.values.push_back(x.values[i]);
  return out;
}

}  // namespace bellsq
