#include "bellsq/diagram.hpp"

#include <algorithm>
#include <sstream>

namespace bellsq {

void Diagram::add_node(std::string id, FinSpace space) {
  if (nodes.count(id)) throw std::invalid_argument("duplicate node id '" + id + "'");
  nodes.emplace(std::move(id), std::move(space));
}

void Diagram::add_edge(const std::string& from, const std::string& to, ProbMap map) {
  auto src = nodes.find(from), dst = nodes.find(to);
  if (src == nodes.end() || dst == nodes.end())
    throw std::invalid_argument("edge endpoint not in diagram: " + from + " -> " + to);
  if (!approx_equal(map.source, src->second) || !approx_equal(map.target, dst->second))
    throw std::invalid_argument("edge map spaces do not match nodes " + from + " -> " + to);
  edges.push_back(Edge{from, to, std::move(map)});
}

Report validate_diagram(const Diagram& d, double tol) {
  Report r;
  for (const auto& [id, space] : d.nodes)
    r.merge(validate_space(space, tol), "node " + id + ": ");
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto& edge = d.edges[e];
    const std::string where = "edge #" + std::to_string(e) + " " + edge.from + "->" + edge.to;
    auto src = d.nodes.find(edge.from), dst = d.nodes.find(edge.to);
    if (src == d.nodes.end() || dst == d.nodes.end()) {
      r.error(where + ": dangling endpoint");
      continue;
    }
    if (!approx_equal(edge.map.source, src->second, tol) ||
        !approx_equal(edge.map.target, dst->second, tol)) {
      r.error(where + ": map spaces do not match endpoint nodes");
      continue;
    }
    if (!is_morphism(edge.map, tol))
      r.error(where + ": target distribution is not the pushforward of the source");
  }
  return r;
}

namespace {

// Kahn's algorithm on the node set; parallel edges just add in-degree.
bool is_acyclic(const Diagram& d) {
  std::map<std::string, std::size_t> indeg;
  for (const auto& [id, _] : d.nodes) indeg[id] = 0;
  for (const auto& e : d.edges) ++indeg[e.to];
  std::vector<std::string> stack;
  for (const auto& [id, deg] : indeg)
    if (deg == 0) stack.push_back(id);
  std::size_t removed = 0;
  while (!stack.empty()) {
    std::string id = stack.back();
    stack.pop_back();
    ++removed;
    for (const auto& e : d.edges)
      if (e.from == id && --indeg[e.to] == 0) stack.push_back(e.to);
  }
  return removed == d.nodes.size();
}

void collect_paths(const Diagram& d, const std::string& node, std::size_t max_len,
                   std::vector<std::size_t>& current,
                   std::map<std::string, std::vector<std::vector<std::size_t>>>& by_end) {
  if (!current.empty()) by_end[node].push_back(current);
  if (current.size() == max_len) return;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    if (d.edges[e].from != node) continue;
    current.push_back(e);
    collect_paths(d, d.edges[e].to, max_len, current, by_end);
    current.pop_back();
  }
}

// Outcome function of a path, as target indices per source outcome.
std::vector<std::size_t> compose_path(const Diagram& d, const std::vector<std::size_t>& path,
                                      std::size_t source_size) {
  std::vector<std::size_t> f(source_size);
  for (std::size_t i = 0; i < source_size; ++i) f[i] = i;
  for (std::size_t e : path)
    for (std::size_t i = 0; i < source_size; ++i) f[i] = d.edges[e].map.table[f[i]];
  return f;
}

}  // namespace

CommutesReport check_commutes(const Diagram& d, std::size_t max_path_len, double tol) {
  if (!is_acyclic(d)) throw std::invalid_argument("cycles unsupported");
  Report valid = validate_diagram(d, tol);
  if (!valid.ok()) throw std::invalid_argument("diagram does not validate:\n" + valid.summary());

  CommutesReport report;
  for (const auto& [start, space] : d.nodes) {
    std::map<std::string, std::vector<std::vector<std::size_t>>> by_end;
    std::vector<std::size_t> current;
    collect_paths(d, start, max_path_len, current, by_end);
    for (const auto& [end, paths] : by_end) {
      if (paths.size() < 2) continue;
      for (std::size_t a = 0; a < paths.size(); ++a) {
        auto fa = compose_path(d, paths[a], space.size());
        for (std::size_t b = a + 1; b < paths.size(); ++b) {
          auto fb = compose_path(d, paths[b], space.size());
          for (std::size_t i = 0; i < fa.size(); ++i) {
            if (fa[i] == fb[i]) continue;
            const FinSpace& target = d.nodes.at(end);
            report.failures.push_back(PathPairFailure{start, end, paths[a], paths[b],
                                                      space.labels[i], target.labels[fa[i]],
                                                      target.labels[fb[i]]});
            break;  // one witness per failing pair
          }
        }
      }
    }
  }
  report.commutes = report.failures.empty();
  return report;
}

std::string describe_path(const Diagram& d, const std::vector<std::size_t>& path) {
  if (path.empty()) return "(empty path)";
  std::ostringstream os;
  os << d.edges[path.front()].from;
  for (std::size_t e : path) os << " -> " << d.edges[e].to;
  return os.str();
}

const JointSpace& BellSquare::joint(MeasPair p) const {
  switch (p) {
    case MeasPair::QS: return qs;
    case MeasPair::RS: return rs;
    case MeasPair::RT: return rt;
    default: return qt;
  }
}

const FinSpace& BellSquare::corner_left(MeasPair p) const {
  return (p == MeasPair::QS || p == MeasPair::QT) ? q : r;
}

const FinSpace& BellSquare::corner_right(MeasPair p) const {
  return (p == MeasPair::QS || p == MeasPair::RS) ? s : t;
}

BellSquare bell_square_from_joints(JointSpace qs, JointSpace rs, JointSpace rt, JointSpace qt) {
  if (!same_labels(qs.left, qt.left) || !same_labels(rs.left, rt.left) ||
      !same_labels(qs.right, rs.right) || !same_labels(rt.right, qt.right))
    throw std::invalid_argument("joints disagree on corner outcome labels");
  BellSquare bs;
  auto [mq, ms] = marginals(qs);
  auto [mr, mt] = marginals(rt);
  bs.q = mq;
  bs.r = mr;
  bs.s = ms;
  bs.t = mt;
  // All four joints share the same corner space objects afterwards.
  qs.left = mq, qs.right = ms;
  rs.left = mr, rs.right = ms;
  rt.left = mr, rt.right = mt;
  qt.left = mq, qt.right = mt;
  bs.qs = std::move(qs);
  bs.rs = std::move(rs);
  bs.rt = std::move(rt);
  bs.qt = std::move(qt);
  return bs;
}

Report validate_bell_square(const BellSquare& bs, double tol) {
  Report r;
  r.merge(validate_space(bs.q, tol), "corner Q: ");
  r.merge(validate_space(bs.r, tol), "corner R: ");
  r.merge(validate_space(bs.s, tol), "corner S: ");
  r.merge(validate_space(bs.t, tol), "corner T: ");
  for (MeasPair p : {MeasPair::QS, MeasPair::RS, MeasPair::RT, MeasPair::QT}) {
    const std::string name = kPairNames[static_cast<std::size_t>(p)];
    const JointSpace& j = bs.joint(p);
    r.merge(validate_joint(j, tol), "joint " + name + ": ");
    const FinSpace& cl = bs.corner_left(p);
    const FinSpace& cr = bs.corner_right(p);
    if (!same_labels(j.left, cl) || !same_labels(j.right, cr)) {
      r.error("joint " + name + ": outcome labels do not match the corner spaces");
      continue;
    }
    auto [ml, mr] = marginals(j);
    for (std::size_t i = 0; i < cl.size(); ++i)
      if (std::abs(ml.probs[i] - cl.probs[i]) > tol) {
        std::ostringstream os;
        os << "pair " << name << ": marginal at '" << cl.labels[i] << "' is " << ml.probs[i]
           << ", expected " << cl.probs[i];
        r.error(os.str());
      }
    for (std::size_t i = 0; i < cr.size(); ++i)
      if (std::abs(mr.probs[i] - cr.probs[i]) > tol) {
        std::ostringstream os;
        os << "pair " << name << ": marginal at '" << cr.labels[i] << "' is " << mr.probs[i]
           << ", expected " << cr.probs[i];
        r.error(os.str());
      }
  }
  return r;
}

Diagram bell_square_as_diagram(const BellSquare& bs) {
  Diagram d;
  d.add_node("Q", bs.q);
  d.add_node("R", bs.r);
  d.add_node("S", bs.s);
  d.add_node("T", bs.t);
  for (MeasPair p : {MeasPair::QS, MeasPair::RS, MeasPair::RT, MeasPair::QT}) {
    const std::string name = kPairNames[static_cast<std::size_t>(p)];
    const JointSpace& j = bs.joint(p);
    d.add_node(name, flatten(j));
    d.add_edge(name, std::string(1, name[0]), left_projection(j));
    d.add_edge(name, std::string(1, name[1]), right_projection(j));
  }
  return d;
}

}  // namespace bellsq
