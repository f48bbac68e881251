#include "bellsq/localreal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bellsq/simplex.hpp"

namespace bellsq {

namespace {

// Axis indices of the two corners each measured pair projects onto.
constexpr std::array<std::array<std::size_t, 2>, 4> kPairAxes{{
    {0, 2},  // QS
    {1, 2},  // RS
    {1, 3},  // RT
    {0, 3},  // QT
}};

std::string tuple_label(const std::string& q, const std::string& r, const std::string& s,
                        const std::string& t) {
  return "(" + q + "," + r + "," + s + "," + t + ")";
}

}  // namespace

std::size_t GlobalJoint::cells() const {
  return axes[0].size() * axes[1].size() * axes[2].size() * axes[3].size();
}

std::size_t GlobalJoint::index(std::size_t q, std::size_t r, std::size_t s,
                               std::size_t t) const {
  return ((q * axes[1].size() + r) * axes[2].size() + s) * axes[3].size() + t;
}

Report validate_global_joint(const GlobalJoint& g, double tol) {
  Report r;
  static constexpr std::array<const char*, 4> axis_names{"Q", "R", "S", "T"};
  for (std::size_t a = 0; a < 4; ++a) {
    r.merge(validate_space(g.axes[a], tol), std::string("axis ") + axis_names[a] + ": ");
  }
  if (g.table.size() != g.cells()) {
    r.error("table has " + std::to_string(g.table.size()) + " cells, expected " +
            std::to_string(g.cells()));
    return r;
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < g.table.size(); ++i) {
    double v = g.table[i];
    if (!std::isfinite(v)) {
      r.error("cell " + std::to_string(i) + " is not finite");
      return r;
    }
    if (v < -tol || v > 1.0 + tol) {
      r.error("cell " + std::to_string(i) + " is " + std::to_string(v) + ", outside [0,1]");
    } else if (v < 0.0) {
      r.warn("cell " + std::to_string(i) + " is negative within tolerance, clamped to 0");
    }
    mass += v;
  }
  if (std::abs(mass - 1.0) > tol) {
    std::ostringstream os;
    os << "prob mass " << mass << " != 1";
    r.error(os.str());
  }
  for (std::size_t a = 0; a < 4; ++a) {
    FinSpace m = axis_marginal(g, a);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (std::abs(m.probs[i] - g.axes[a].probs[i]) > tol) {
        std::ostringstream os;
        os << "axis " << axis_names[a] << ": marginal at '" << m.labels[i] << "' is "
           << m.probs[i] << ", expected " << g.axes[a].probs[i];
        r.error(os.str());
      }
    }
  }
  return r;
}

FinSpace axis_marginal(const GlobalJoint& g, std::size_t axis) {
  if (axis >= 4) throw std::invalid_argument("axis out of range");
  FinSpace out;
  out.labels = g.axes[axis].labels;
  out.probs.assign(out.labels.size(), 0.0);
  const std::size_t nq = g.size(0), nr = g.size(1), ns = g.size(2), nt = g.size(3);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t) {
          const std::size_t which[4] = {q, r, s, t};
          out.probs[which[axis]] += g.table[g.index(q, r, s, t)];
        }
  return out;
}

JointSpace pair_marginal(const GlobalJoint& g, std::size_t axis_a, std::size_t axis_b) {
  if (axis_a >= 4 || axis_b >= 4 || axis_a >= axis_b)
    throw std::invalid_argument("pair_marginal needs two distinct axes in order");
  JointSpace j;
  j.left = g.axes[axis_a];
  j.right = g.axes[axis_b];
  j.table.assign(j.left.size() * j.right.size(), 0.0);
  const std::size_t nq = g.size(0), nr = g.size(1), ns = g.size(2), nt = g.size(3);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t) {
          const std::size_t which[4] = {q, r, s, t};
          j.at(which[axis_a], which[axis_b]) += g.table[g.index(q, r, s, t)];
        }
  // Re-derive the stored side distributions so the joint is self-consistent
  // even when the axes carry stale probabilities.
  auto [left, right] = marginals(j);
  j.left.probs = left.probs;
  j.right.probs = right.probs;
  return j;
}

JointSpace pair_marginal(const GlobalJoint& g, MeasPair p) {
  const auto ax = kPairAxes[static_cast<std::size_t>(p)];
  return pair_marginal(g, ax[0], ax[1]);
}

FinSpace flatten(const GlobalJoint& g) {
  FinSpace out;
  out.labels.reserve(g.cells());
  out.probs.reserve(g.cells());
  const std::size_t nq = g.size(0), nr = g.size(1), ns = g.size(2), nt = g.size(3);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t t = 0; t < nt; ++t) {
          out.labels.push_back(tuple_label(g.axes[0].labels[q], g.axes[1].labels[r],
                                           g.axes[2].labels[s], g.axes[3].labels[t]));
          out.probs.push_back(std::max(0.0, g.table[g.index(q, r, s, t)]));
        }
  return out;
}

namespace {

struct LpLayout {
  std::size_t nq, nr, ns, nt;
  std::size_t vars;                  // one per outcome tuple
  std::array<std::size_t, 4> offset; // first row of each pair block
  std::size_t rows;
};

LpLayout layout_for(const BellSquare& bs) {
  LpLayout l;
  l.nq = bs.q.size();
  l.nr = bs.r.size();
  l.ns = bs.s.size();
  l.nt = bs.t.size();
  l.vars = l.nq * l.nr * l.ns * l.nt;
  std::size_t row = 0;
  for (std::size_t p = 0; p < 4; ++p) {
    l.offset[p] = row;
    const auto& j = bs.joint(static_cast<MeasPair>(p));
    row += j.left.size() * j.right.size();
  }
  l.rows = row;
  return l;
}

// Row hit by variable (q,r,s,t) within pair block p.
std::size_t row_of(const LpLayout& l, std::size_t p, std::size_t q, std::size_t r,
                   std::size_t s, std::size_t t) {
  const std::size_t which[4] = {q, r, s, t};
  const auto ax = kPairAxes[p];
  const std::size_t sizes[4] = {l.nq, l.nr, l.ns, l.nt};
  return l.offset[p] + which[ax[0]] * sizes[ax[1]] + which[ax[1]];
}

}  // namespace

RealizationResult find_local_realization(const BellSquare& bs, double tol) {
  Report v = validate_bell_square(bs);
  if (!v.ok()) {
    throw std::invalid_argument("square does not validate:\n" + v.summary());
  }
  const LpLayout l = layout_for(bs);

  std::vector<double> a(l.rows * l.vars, 0.0);
  std::vector<double> b(l.rows, 0.0);
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& j = bs.joint(static_cast<MeasPair>(p));
    for (std::size_t i = 0; i < j.table.size(); ++i) {
      b[l.offset[p] + i] = std::max(0.0, j.table[i]);
    }
  }
  std::size_t var = 0;
  for (std::size_t q = 0; q < l.nq; ++q)
    for (std::size_t r = 0; r < l.nr; ++r)
      for (std::size_t s = 0; s < l.ns; ++s)
        for (std::size_t t = 0; t < l.nt; ++t, ++var)
          for (std::size_t p = 0; p < 4; ++p)
            a[row_of(l, p, q, r, s, t) * l.vars + var] = 1.0;

  lp::Phase1Result res = lp::phase1_feasibility(a, l.rows, l.vars, b);

  RealizationResult out;
  if (res.infeasibility <= tol) {
    GlobalJoint g;
    g.axes = {bs.q, bs.r, bs.s, bs.t};
    g.table = clamp_small_negatives(std::move(res.x), tol);
    out.value = std::move(g);
    return out;
  }

  InfeasibilityCertificate c;
  double scale = 0.0;
  for (double y : res.y) scale = std::max(scale, std::abs(y));
  if (!(scale > 0.0)) {
    throw NumericalFailure("infeasible system produced a zero separating functional");
  }
  c.observed = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& j = bs.joint(static_cast<MeasPair>(p));
    c.weights[p].resize(j.table.size());
    for (std::size_t i = 0; i < j.table.size(); ++i) {
      c.weights[p][i] = res.y[l.offset[p] + i] / scale;
      c.observed += c.weights[p][i] * j.table[i];
    }
  }
  c.bound = 0.0;
  bool first = true;
  for (std::size_t q = 0; q < l.nq; ++q)
    for (std::size_t r = 0; r < l.nr; ++r)
      for (std::size_t s = 0; s < l.ns; ++s)
        for (std::size_t t = 0; t < l.nt; ++t) {
          double sum = 0.0;
          for (std::size_t p = 0; p < 4; ++p) {
            const std::size_t row = row_of(l, p, q, r, s, t) - l.offset[p];
            sum += c.weights[p][row];
          }
          if (first || sum > c.bound) c.bound = sum;
          first = false;
        }
  Report check = verify_certificate(bs, c, tol);
  if (!check.ok()) {
    throw NumericalFailure("derived inequality failed verification:\n" + check.summary());
  }
  out.value = std::move(c);
  return out;
}

Report verify_realization(const BellSquare& bs, const GlobalJoint& g, double tol) {
  Report r;
  static constexpr std::array<const char*, 4> axis_names{"Q", "R", "S", "T"};
  const std::array<const FinSpace*, 4> corners{&bs.q, &bs.r, &bs.s, &bs.t};
  for (std::size_t a = 0; a < 4; ++a) {
    if (!same_labels(g.axes[a], *corners[a])) {
      r.error(std::string("axis ") + axis_names[a] + " labels do not match the square");
    }
  }
  if (g.table.size() != g.cells()) {
    r.error("extension table has the wrong number of cells");
  }
  if (!r.ok()) return r;

  const std::size_t nq = g.size(0), nr = g.size(1), ns = g.size(2), nt = g.size(3);
  Diagram d;
  d.add_node("QRST", flatten(g));
  for (std::size_t a = 0; a < 4; ++a) d.add_node(axis_names[a], *corners[a]);
  for (std::size_t p = 0; p < 4; ++p) {
    d.add_node(kPairNames[p], flatten(bs.joint(static_cast<MeasPair>(p))));
  }

  // Extension -> pair: map each tuple onto its (a,b) cell within the pair.
  for (std::size_t p = 0; p < 4; ++p) {
    const auto ax = kPairAxes[p];
    const std::size_t sizes[4] = {nq, nr, ns, nt};
    ProbMap m;
    m.source = flatten(g);
    m.target = flatten(bs.joint(static_cast<MeasPair>(p)));
    m.table.reserve(g.cells());
    for (std::size_t q = 0; q < nq; ++q)
      for (std::size_t rr = 0; rr < nr; ++rr)
        for (std::size_t s = 0; s < ns; ++s)
          for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t which[4] = {q, rr, s, t};
            m.table.push_back(which[ax[0]] * sizes[ax[1]] + which[ax[1]]);
          }
    d.add_edge("QRST", kPairNames[p], std::move(m));
  }
  // Pair -> corner: the canonical projections of the square itself. Targets
  // are the corner node spaces so the maps match the diagram exactly; the
  // marginal conditions are then what validate_diagram checks per edge.
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& j = bs.joint(static_cast<MeasPair>(p));
    const auto ax = kPairAxes[p];
    const std::size_t nb = j.right.size();
    ProbMap to_left, to_right;
    to_left.source = flatten(j);
    to_left.target = *corners[ax[0]];
    to_right.source = flatten(j);
    to_right.target = *corners[ax[1]];
    for (std::size_t i = 0; i < j.left.size(); ++i)
      for (std::size_t k = 0; k < nb; ++k) {
        to_left.table.push_back(i);
        to_right.table.push_back(k);
      }
    d.add_edge(kPairNames[p], axis_names[ax[0]], std::move(to_left));
    d.add_edge(kPairNames[p], axis_names[ax[1]], std::move(to_right));
  }

  r.merge(validate_diagram(d, tol), "extension diagram: ");
  if (!r.ok()) return r;
  CommutesReport cr = check_commutes(d, 4, tol);
  if (!cr.commutes) {
    for (const auto& f : cr.failures) {
      r.error("paths " + describe_path(d, f.path_a) + " and " + describe_path(d, f.path_b) +
              " disagree at '" + f.witness + "': " + f.value_a + " vs " + f.value_b);
    }
  }
  return r;
}

double certificate_score(const BellSquare& bs, const InfeasibilityCertificate& c) {
  double score = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& j = bs.joint(static_cast<MeasPair>(p));
    if (c.weights[p].size() != j.table.size())
      throw std::invalid_argument("certificate shape does not match the square");
    for (std::size_t i = 0; i < j.table.size(); ++i) score += c.weights[p][i] * j.table[i];
  }
  return score;
}

Report verify_certificate(const BellSquare& bs, const InfeasibilityCertificate& c,
                          double tol) {
  Report r;
  for (std::size_t p = 0; p < 4; ++p) {
    const auto& j = bs.joint(static_cast<MeasPair>(p));
    if (c.weights[p].size() != j.table.size()) {
      r.error(std::string("weights for pair ") + kPairNames[p] + " have " +
              std::to_string(c.weights[p].size()) + " cells, expected " +
              std::to_string(j.table.size()));
    }
  }
  if (!r.ok()) return r;

  const LpLayout l = layout_for(bs);
  for (std::size_t q = 0; q < l.nq; ++q)
    for (std::size_t rr = 0; rr < l.nr; ++rr)
      for (std::size_t s = 0; s < l.ns; ++s)
        for (std::size_t t = 0; t < l.nt; ++t) {
          double sum = 0.0;
          for (std::size_t p = 0; p < 4; ++p) {
            sum += c.weights[p][row_of(l, p, q, rr, s, t) - l.offset[p]];
          }
          if (sum > c.bound + tol) {
            std::ostringstream os;
            os << "deterministic tuple " << tuple_label(bs.q.labels[q], bs.r.labels[rr],
                                                        bs.s.labels[s], bs.t.labels[t])
               << " scores " << sum << " > bound " << c.bound;
            r.error(os.str());
          }
        }
  const double score = certificate_score(bs, c);
  if (std::abs(score - c.observed) > tol) {
    std::ostringstream os;
    os << "stored observed value " << c.observed << " does not match the recomputed score "
       << score;
    r.error(os.str());
  }
  if (!(c.observed > c.bound + tol)) {
    std::ostringstream os;
    os << "observed value " << c.observed << " does not exceed the bound " << c.bound
       << " by more than " << tol;
    r.error(os.str());
  }
  return r;
}

FinSpace flatten(const TripleJoint& t) {
  FinSpace out;
  const std::size_t n0 = t.axes[0].size(), n1 = t.axes[1].size(), n2 = t.axes[2].size();
  out.labels.reserve(n0 * n1 * n2);
  out.probs.reserve(n0 * n1 * n2);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n2; ++k) {
        out.labels.push_back("(" + t.axes[0].labels[i] + "," + t.axes[1].labels[j] + "," +
                             t.axes[2].labels[k] + ")");
        out.probs.push_back(std::max(0.0, t.table[t.index(i, j, k)]));
      }
  return out;
}

TripleJoint locality_extension(const JointSpace& ja, const JointSpace& jb, double tol) {
  if (!same_labels(ja.left, jb.left)) {
    throw std::invalid_argument("joints do not share their left outcome set");
  }
  for (std::size_t i = 0; i < ja.left.size(); ++i) {
    if (std::abs(ja.left.probs[i] - jb.left.probs[i]) > tol) {
      std::ostringstream os;
      os << "shared marginal disagrees at '" << ja.left.labels[i] << "': " << ja.left.probs[i]
         << " vs " << jb.left.probs[i];
      throw std::invalid_argument(os.str());
    }
  }
  TripleJoint out;
  out.axes = {ja.left, ja.right, jb.right};
  const std::size_t n0 = ja.left.size(), n1 = ja.right.size(), n2 = jb.right.size();
  out.table.assign(n0 * n1 * n2, 0.0);
  for (std::size_t i = 0; i < n0; ++i) {
    const double mass = ja.left.probs[i];
    if (mass <= 0.0) continue;  // no-mass slice stays zero
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n2; ++k)
        out.table[out.index(i, j, k)] = ja.at(i, j) * jb.at(i, k) / mass;
  }
  return out;
}

Diagram locality_extension_diagram(const TripleJoint& ext, const JointSpace& ja,
                                   const JointSpace& jb) {
  const std::size_t n0 = ext.axes[0].size(), n1 = ext.axes[1].size(), n2 = ext.axes[2].size();
  Diagram d;
  d.add_node("EXT", flatten(ext));
  d.add_node("JA", flatten(ja));
  d.add_node("JB", flatten(jb));
  d.add_node("SHARED", ja.left);

  ProbMap to_a;
  to_a.source = flatten(ext);
  to_a.target = flatten(ja);
  ProbMap to_b;
  to_b.source = flatten(ext);
  to_b.target = flatten(jb);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n2; ++k) {
        to_a.table.push_back(i * n1 + j);
        to_b.table.push_back(i * n2 + k);
      }
  d.add_edge("EXT", "JA", std::move(to_a));
  d.add_edge("EXT", "JB", std::move(to_b));
  d.add_edge("JA", "SHARED", left_projection(ja));
  ProbMap jb_shared = left_projection(jb);
  jb_shared.target = ja.left;  // the node space; may differ from jb.left within tol
  d.add_edge("JB", "SHARED", std::move(jb_shared));
  return d;
}

GlobalJoint realization_product(const FinSpace& cq, const FinSpace& cr, const FinSpace& cs,
                                const FinSpace& ct) {
  GlobalJoint g;
  g.axes = {cq, cr, cs, ct};
  g.table.reserve(g.cells());
  for (double pq : cq.probs)
    for (double pr : cr.probs)
      for (double ps : cs.probs)
        for (double pt : ct.probs) g.table.push_back(pq * pr * ps * pt);
  return g;
}

Report verify_realism_extension(const BellSquare& bs, const GlobalJoint& g, double tol) {
  Report r;
  static constexpr std::array<const char*, 4> axis_names{"Q", "R", "S", "T"};
  const std::array<const FinSpace*, 4> corners{&bs.q, &bs.r, &bs.s, &bs.t};
  for (std::size_t a = 0; a < 4; ++a) {
    if (!same_labels(g.axes[a], *corners[a])) {
      r.error(std::string("axis ") + axis_names[a] + " labels do not match the square");
      continue;
    }
    FinSpace m = axis_marginal(g, a);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (std::abs(m.probs[i] - corners[a]->probs[i]) > tol) {
        std::ostringstream os;
        os << "axis " << axis_names[a] << ": marginal at '" << m.labels[i] << "' is "
           << m.probs[i] << ", expected " << corners[a]->probs[i];
        r.error(os.str());
      }
    }
  }
  return r;
}

}  // namespace bellsq
