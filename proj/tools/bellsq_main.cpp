// Command line front end: validity checks, realization search, CHSH
// evaluation, and Born-rule square generation.
//
// Exit codes: 0 success / feasible / no violation, 1 invalid input data,
// 2 usage or parse errors, 3 infeasible / violation, 4 numerical failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsq/chsh.hpp"
#include "bellsq/io.hpp"
#include "bellsq/localreal.hpp"
#include "bellsq/quantum.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvalidInput = 1;
constexpr int kUsage = 2;
constexpr int kNegative = 3;
constexpr int kNumerical = 4;

bellsq::UnitVector3 parse_vec3(const std::string& text) {
  bellsq::UnitVector3 v;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &v.x, &v.y, &v.z, &extra) != 3)
    throw std::runtime_error("expected three comma-separated numbers, got '" + text + "'");
  return v;
}

json expectations_json(const std::array<double, 4>& e) {
  json out;
  for (std::size_t p = 0; p < 4; ++p) out[bellsq::kPairNames[p]] = e[p];
  return out;
}

json signs_json(const bellsq::ChshAssignment& a) {
  json out;
  const std::array<const bellsq::DichotomicRV*, 4> vars{&a.xq, &a.xr, &a.xs, &a.xt};
  static constexpr std::array<const char*, 4> names{"Q", "R", "S", "T"};
  for (std::size_t i = 0; i < 4; ++i) {
    json arr = json::array();
    for (double v : vars[i]->rv.values) arr.push_back(static_cast<int>(v));
    out[names[i]] = std::move(arr);
  }
  return out;
}

int cmd_check(const std::string& path, double tol, bool as_json) {
  bellsq::BellSquareDoc doc = bellsq::load_bell_square(path);
  bellsq::Report r = bellsq::validate_bell_square(doc.square, tol);
  if (as_json) {
    json out{{"valid", r.ok()}, {"violations", r.errors}, {"warnings", r.warnings}};
    std::cout << out.dump(2) << "\n";
  } else if (r.ok()) {
    std::cout << "valid square";
    if (!r.warnings.empty()) std::cout << " (" << r.warnings.size() << " warnings)";
    std::cout << "\n";
  } else {
    std::cout << r.summary();
  }
  return r.ok() ? kOk : kInvalidInput;
}

int cmd_realize(const std::string& path, double tol, bool emit_cert, bool as_json) {
  bellsq::BellSquareDoc doc = bellsq::load_bell_square(path);
  bellsq::Report r = bellsq::validate_bell_square(doc.square);
  if (!r.ok()) {
    std::cerr << r.summary();
    return kInvalidInput;
  }
  bellsq::RealizationResult res = bellsq::find_local_realization(doc.square, tol);
  if (res.feasible()) {
    const bellsq::GlobalJoint& g = res.joint();
    std::size_t support = 0;
    for (double v : g.table)
      if (v > 0.0) ++support;
    if (as_json) {
      json out{{"status", "feasible"},
               {"shape", {g.size(0), g.size(1), g.size(2), g.size(3)}},
               {"joint", g.table}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "feasible: hidden-variable distribution on " << g.cells()
                << " outcome tuples (support " << support << ")\n";
    }
    return kOk;
  }
  const bellsq::InfeasibilityCertificate& c = res.certificate();
  if (as_json) {
    json weights;
    for (std::size_t p = 0; p < 4; ++p) {
      const auto& j = doc.square.joint(static_cast<bellsq::MeasPair>(p));
      json rows = json::array();
      for (std::size_t i = 0; i < j.left.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < j.right.size(); ++k)
          row.push_back(c.weights[p][i * j.right.size() + k]);
        rows.push_back(std::move(row));
      }
      weights[bellsq::kPairNames[p]] = std::move(rows);
    }
    json out{{"status", "infeasible"},
             {"certificate",
              json{{"weights", std::move(weights)}, {"bound", c.bound}, {"observed", c.observed}}}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "infeasible: no hidden-variable distribution reproduces these statistics\n";
    std::ostringstream os;
    os.precision(12);
    os << "separating inequality: deterministic bound " << c.bound << ", observed " << c.observed
       << ", gap " << (c.observed - c.bound) << "\n";
    std::cout << os.str();
    if (emit_cert) {
      std::ostringstream cert;
      cert.precision(12);
      for (std::size_t p = 0; p < 4; ++p) {
        const auto& j = doc.square.joint(static_cast<bellsq::MeasPair>(p));
        cert << "weights " << bellsq::kPairNames[p] << ":";
        for (std::size_t i = 0; i < c.weights[p].size(); ++i) {
          cert << (i % j.right.size() == 0 ? "\n  " : "  ") << c.weights[p][i];
        }
        cert << "\n";
      }
      std::cout << cert.str();
    }
  }
  return kNegative;
}

int cmd_chsh(const std::string& path, double tol, bool maximize, bool as_json) {
  bellsq::BellSquareDoc doc = bellsq::load_bell_square(path);
  bellsq::Report r = bellsq::validate_bell_square(doc.square);
  if (!r.ok()) {
    std::cerr << r.summary();
    return kInvalidInput;
  }
  bellsq::ChshAssignment a;
  if (maximize) {
    a = bellsq::max_chsh(doc.square).assignment;
  } else {
    if (!doc.rvs) {
      std::cerr << "square file carries no outcome variables; add \"rvs\" or pass --maximize\n";
      return kUsage;
    }
    a.xq = bellsq::make_dichotomic(doc.square.q, doc.rvs->values[0]);
    a.xr = bellsq::make_dichotomic(doc.square.r, doc.rvs->values[1]);
    a.xs = bellsq::make_dichotomic(doc.square.s, doc.rvs->values[2]);
    a.xt = bellsq::make_dichotomic(doc.square.t, doc.rvs->values[3]);
  }
  const std::array<double, 4> e = bellsq::chsh_expectations(doc.square, a);
  const double value = bellsq::chsh_value(doc.square, a);
  const bool violation = value > 2.0 + tol;
  if (as_json) {
    json out{{"value", value},
             {"expectations", expectations_json(e)},
             {"minus", bellsq::kPairNames[static_cast<std::size_t>(a.minus_term)]},
             {"signs", signs_json(a)},
             {"violation", violation}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::ostringstream os;
    os.precision(12);
    os << (maximize ? "max chsh value " : "chsh value ") << value
       << (violation ? " (exceeds the locally realistic ceiling 2)" : " (within the ceiling 2)")
       << "\n";
    os << "correlators:";
    for (std::size_t p = 0; p < 4; ++p) os << " " << bellsq::kPairNames[p] << "=" << e[p];
    os << ", minus term " << bellsq::kPairNames[static_cast<std::size_t>(a.minus_term)] << "\n";
    std::cout << os.str();
  }
  return violation ? kNegative : kOk;
}

int cmd_quantum(const std::string& state, const std::string& uq, const std::string& ur,
                const std::string& us, const std::string& ut, const std::string& out_path) {
  bellsq::DensityMatrix rho;
  if (state == "epr") {
    rho = bellsq::epr_state();
  } else if (state == "maxmixed") {
    rho = bellsq::max_mixed_state();
  } else {
    try {
      rho = bellsq::load_density(state);
    } catch (const std::invalid_argument& e) {
      std::cerr << state << ": " << e.what() << "\n";
      return kInvalidInput;
    }
  }
  bellsq::BellSquare bs = bellsq::build_quantum_bell_square(
      rho, parse_vec3(uq), parse_vec3(ur), parse_vec3(us), parse_vec3(ut));

  bellsq::BellSquareDoc doc;
  doc.square = std::move(bs);
  bellsq::CornerRvs rvs;
  for (std::size_t i = 0; i < 4; ++i) rvs.values[i] = {1.0, -1.0};  // first outcome is +1
  doc.rvs = rvs;
  bellsq::save_bell_square(doc, out_path);
  std::cout << "wrote " << out_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decide local realism of two-party measurement statistics"};
  app.require_subcommand(1);

  std::string path, out_path;
  std::string state = "epr";
  std::string uq, ur, us, ut;
  double check_tol = bellsq::kDefaultTol;
  double lp_tol = bellsq::kDefaultLpTol;
  double chsh_tol = bellsq::kDefaultTol;
  bool emit_cert = false, maximize = false;
  bool json_check = false, json_realize = false, json_chsh = false;

  CLI::App* check = app.add_subcommand("check", "validate a square file");
  check->add_option("file", path, "square JSON file")->required();
  check->add_option("--tol", check_tol, "validation tolerance");
  check->add_flag("--json", json_check, "machine-readable report");

  CLI::App* realize = app.add_subcommand(
      "realize", "find a hidden-variable distribution or a separating inequality");
  realize->add_option("file", path, "square JSON file")->required();
  realize->add_option("--tol", lp_tol, "feasibility tolerance");
  realize->add_flag("--emit-certificate", emit_cert, "print the inequality weights");
  realize->add_flag("--json", json_realize, "machine-readable report");

  CLI::App* chsh = app.add_subcommand("chsh", "evaluate the chsh combination");
  chsh->add_option("file", path, "square JSON file")->required();
  chsh->add_flag("--maximize", maximize, "search all sign assignments");
  chsh->add_option("--tol", chsh_tol, "violation tolerance");
  chsh->add_flag("--json", json_chsh, "machine-readable report");

  CLI::App* quantum =
      app.add_subcommand("quantum", "generate the square of a two-qubit state via the Born rule");
  quantum->add_option("--state", state, "epr, maxmixed, or a density matrix JSON file");
  quantum->add_option("--uQ", uq, "spin direction x,y,z")->required();
  quantum->add_option("--uR", ur, "spin direction x,y,z")->required();
  quantum->add_option("--uS", us, "spin direction x,y,z")->required();
  quantum->add_option("--uT", ut, "spin direction x,y,z")->required();
  quantum->add_option("--out", out_path, "output square JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(path, check_tol, json_check);
    if (*realize) return cmd_realize(path, lp_tol, emit_cert, json_realize);
    if (*chsh) return cmd_chsh(path, chsh_tol, maximize, json_chsh);
    if (*quantum) return cmd_quantum(state, uq, ur, us, ut, out_path);
  } catch (const bellsq::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
