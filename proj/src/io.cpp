#include "bellsq/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bellsq {

namespace {

using nlohmann::json;

json space_to_json(const FinSpace& s) {
  return json{{"labels", s.labels}, {"probs", s.probs}};
}

json table_to_json(const JointSpace& j) {
  json rows = json::array();
  for (std::size_t i = 0; i < j.left.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < j.right.size(); ++k) row.push_back(j.at(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

const json& need(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::runtime_error(std::string("missing key '") + key + "' in " + where);
  return *it;
}

FinSpace space_from_json(const json& j, const std::string& name) {
  if (!j.is_object()) throw std::runtime_error("corner " + name + " is not an object");
  FinSpace s;
  const json& labels = need(j, "labels", ("corner " + name).c_str());
  const json& probs = need(j, "probs", ("corner " + name).c_str());
  if (!labels.is_array() || !probs.is_array())
    throw std::runtime_error("corner " + name + ": labels/probs must be arrays");
  for (const auto& l : labels) {
    if (!l.is_string()) throw std::runtime_error("corner " + name + ": labels must be strings");
    s.labels.push_back(l.get<std::string>());
  }
  for (const auto& p : probs) {
    if (!p.is_number()) throw std::runtime_error("corner " + name + ": probs must be numbers");
    s.probs.push_back(p.get<double>());
  }
  if (s.labels.empty() || s.labels.size() != s.probs.size())
    throw std::runtime_error("corner " + name + ": labels and probs sizes disagree");
  return s;
}

JointSpace table_from_json(const json& j, const std::string& name, const FinSpace& left,
                           const FinSpace& right) {
  if (!j.is_array() || j.size() != left.size())
    throw std::runtime_error("joint " + name + " must have one row per " +
                             std::to_string(left.size()) + " outcomes");
  JointSpace out;
  out.left = left;
  out.right = right;
  out.table.reserve(left.size() * right.size());
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != right.size())
      throw std::runtime_error("joint " + name + " rows must have " +
                               std::to_string(right.size()) + " entries");
    for (const auto& v : row) {
      if (!v.is_number()) throw std::runtime_error("joint " + name + " entries must be numbers");
      out.table.push_back(v.get<double>());
    }
  }
  return out;
}

std::vector<double> rvs_from_json(const json& j, const std::string& name, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    throw std::runtime_error("rvs " + name + " must list one value per outcome");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw std::runtime_error("rvs " + name + " entries must be numbers");
    const double d = v.get<double>();
    if (d != 1.0 && d != -1.0)
      throw std::runtime_error("rvs " + name + " entries must be exactly +1 or -1");
    out.push_back(d);
  }
  return out;
}

}  // namespace

std::string serialize_bell_square(const BellSquareDoc& doc) {
  const BellSquare& bs = doc.square;
  json j;
  j["corners"] = {{"Q", space_to_json(bs.q)},
                  {"R", space_to_json(bs.r)},
                  {"S", space_to_json(bs.s)},
                  {"T", space_to_json(bs.t)}};
  j["joints"] = {{"QS", table_to_json(bs.qs)},
                 {"RS", table_to_json(bs.rs)},
                 {"RT", table_to_json(bs.rt)},
                 {"QT", table_to_json(bs.qt)}};
  if (doc.rvs) {
    json rvs;
    static constexpr std::array<const char*, 4> names{"Q", "R", "S", "T"};
    for (std::size_t i = 0; i < 4; ++i) {
      json arr = json::array();
      for (double v : doc.rvs->values[i]) arr.push_back(static_cast<int>(v));
      rvs[names[i]] = std::move(arr);
    }
    j["rvs"] = std::move(rvs);
  }
  return j.dump(2) + "\n";
}

BellSquareDoc parse_bell_square(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("top level must be an object");
  const json& corners = need(j, "corners", "document");
  const json& joints = need(j, "joints", "document");

  BellSquareDoc doc;
  BellSquare& bs = doc.square;
  bs.q = space_from_json(need(corners, "Q", "corners"), "Q");
  bs.r = space_from_json(need(corners, "R", "corners"), "R");
  bs.s = space_from_json(need(corners, "S", "corners"), "S");
  bs.t = space_from_json(need(corners, "T", "corners"), "T");
  bs.qs = table_from_json(need(joints, "QS", "joints"), "QS", bs.q, bs.s);
  bs.rs = table_from_json(need(joints, "RS", "joints"), "RS", bs.r, bs.s);
  bs.rt = table_from_json(need(joints, "RT", "joints"), "RT", bs.r, bs.t);
  bs.qt = table_from_json(need(joints, "QT", "joints"), "QT", bs.q, bs.t);

  if (auto it = j.find("rvs"); it != j.end()) {
    CornerRvs rvs;
    rvs.values[0] = rvs_from_json(need(*it, "Q", "rvs"), "Q", bs.q.size());
    rvs.values[1] = rvs_from_json(need(*it, "R", "rvs"), "R", bs.r.size());
    rvs.values[2] = rvs_from_json(need(*it, "S", "rvs"), "S", bs.s.size());
    rvs.values[3] = rvs_from_json(need(*it, "T", "rvs"), "T", bs.t.size());
    doc.rvs = std::move(rvs);
  }
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

BellSquareDoc load_bell_square(const std::string& path) {
  try {
    return parse_bell_square(read_text_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_bell_square(const BellSquareDoc& doc, const std::string& path) {
  write_text_file(path, serialize_bell_square(doc));
}

DensityMatrix load_density(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": JSON parse error: " + e.what());
  }
  const json& rows = need(j, "rho", "density file");
  if (!rows.is_array() || rows.size() != 4)
    throw std::runtime_error(path + ": rho must be a 4x4 array");
  CMatrix m(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != 4)
      throw std::runtime_error(path + ": rho must be a 4x4 array");
    for (std::size_t k = 0; k < 4; ++k) {
      const json& cell = row[k];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw std::runtime_error(path + ": each rho entry must be [re, im]");
      m.at(i, k) = Complex{cell[0].get<double>(), cell[1].get<double>()};
    }
  }
  return make_density(m);
}

}  // namespace bellsq
