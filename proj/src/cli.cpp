#include "treelie/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "treelie/errors.hpp"
#include "treelie/expr.hpp"
#include "treelie/first.hpp"
#include "treelie/heat.hpp"
#include "treelie/ideals.hpp"
#include "treelie/lie.hpp"
#include "treelie/tree.hpp"

namespace treelie {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kMaxInfoDim = 2000;
constexpr double kMaxCsvPoints = 1e6;
constexpr double kModeThreshold = 1e-12;

void dump_to(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ", ";
        first = false;
        out += Json(k).dump();
        out += ": ";
        dump_to(v, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        dump_to(v, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      if (!std::isfinite(v)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ValidationError("malformed number '" + item + "' in " + what);
    }
  }
  if (out.empty()) throw ValidationError(what + " is empty");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (double v : parse_doubles(text, what)) {
    if (v != std::floor(v) || std::abs(v) > 1e6) throw ValidationError(what + " must list integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Json bigint_json(const BigInt& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

Json root_json(const Root& r) { return Json(r); }

Json cmd_info(const TreeDiagram& tree, Direction dir) {
  TreeAlgebra alg(tree, dir);
  if (alg.dim() > kMaxInfoDim)
    throw GuardError("algebra dimension " + std::to_string(alg.dim()) + " exceeds the info limit of " +
                     std::to_string(kMaxInfoDim));
  auto dn = dim_and_nilpotence(tree, dir);
  auto rep = verify_structure(alg);
  auto nc = classify_nodes(tree);
  Json j;
  j["direction"] = direction_name(dir);
  j["n"] = tree.size();
  j["dim"] = dn.dim;
  j["basis_size"] = alg.dim();
  j["nilpotence"] = dn.nilpotence;
  j["graded_nilpotence"] = graded_nilpotence(tree, dir);
  j["central_series_length"] = rep.central_series_length();
  j["central_series_dims"] = rep.central_series_dims;
  Json center = Json::array();
  for (const auto& e : rep.center_basis) center.push_back(e.to_string());
  j["center"] = center;
  j["center_verified"] = rep.center_matches;
  j["closure"] = rep.closure;
  j["generated_dim"] = rep.generated_dim;
  j["tips"] = nc.tips;
  j["upsilon"] = nc.upsilon;
  j["phi"] = nc.phi;
  j["omega"] = nc.omega;
  return j;
}

Json cmd_basis(const TreeDiagram& tree, Direction dir) {
  Json list = Json::array();
  for (const auto& m : enumerate_basis(tree, dir)) {
    Json e;
    e["name"] = m.name();
    e["coeff"] = "1";
    e["exps"] = m.exps;
    e["d"] = m.dvar;
    e["root"] = root_json(root_of(m));
    list.push_back(e);
  }
  Json j;
  j["direction"] = direction_name(dir);
  j["dim"] = list.size();
  j["basis"] = list;
  return j;
}

Json cmd_ideals(const TreeDiagram& tree, Direction dir, bool count_only) {
  const int roots = static_cast<int>(enumerate_basis(tree, dir).size());
  const bool oracle = roots <= kBruteForceMaxRoots;
  Json j;
  j["direction"] = direction_name(dir);
  if (count_only) {
    BigInt count = count_ideals(tree, dir);
    if (oracle && BigInt(static_cast<long>(brute_force_ideals(tree, dir).size())) != count)
      throw std::runtime_error("ideal count disagrees with the brute-force oracle");
    j["count"] = bigint_json(count);
    // the I(S) construction is only trusted upward; downward needs the full list
    if (roots <= kListMaxRoots) j["maximal_count"] = exact_maximal_ideals(tree, dir).size();
    else if (dir == Direction::Up) j["maximal_count"] = maximal_ideals(tree, dir).size();
    else j["maximal_count"] = nullptr;
    j["oracle_checked"] = oracle;
    return j;
  }
  auto ideals = enumerate_ideals(tree, dir);
  if (oracle) {
    auto brute = brute_force_ideals(tree, dir);
    std::vector<std::vector<Root>> listed;
    for (const auto& I : ideals) listed.push_back(I.roots);
    std::sort(brute.begin(), brute.end(), ideal_less);
    std::sort(listed.begin(), listed.end(), ideal_less);
    if (brute != listed) throw std::runtime_error("ideal list disagrees with the brute-force oracle");
  }
  std::set<std::vector<Root>> max_set;
  for (const auto& I : exact_maximal_ideals(tree, dir)) max_set.insert(I.roots);
  Json list = Json::array();
  for (const auto& I : ideals) {
    Json e;
    Json rs = Json::array();
    for (const auto& r : I.roots) rs.push_back(root_json(r));
    e["roots"] = rs;
    e["dim"] = I.dim();
    e["maximal"] = max_set.count(I.roots) > 0;
    list.push_back(e);
  }
  j["count"] = ideals.size();
  j["maximal_count"] = max_set.size();
  j["oracle_checked"] = oracle;
  j["ideals"] = list;
  return j;
}

Json cmd_bch(int K) {
  auto c = bch_coefficients(K);
  Json a = Json::array(), th = Json::array();
  for (const auto& v : c.a) a.push_back(v.to_string());
  for (const auto& v : c.theta) th.push_back(v.to_string());
  Json j;
  j["a"] = a;
  j["theta"] = th;
  return j;
}

struct FirstArgs {
  std::string tree, f, x, verify;
  double t = 0.0;
  bool emit_eta = false;
};

Json cmd_solve_first(const FirstArgs& a) {
  const auto tree = load_tree_file(a.tree);
  const auto f = parse_expression(a.f, tree.size());
  const auto x = parse_doubles(a.x, "--x");
  if (static_cast<int>(x.size()) != tree.size())
    throw ValidationError("--x has " + std::to_string(x.size()) + " entries, expected " + std::to_string(tree.size()));
  VerifyMode mode = is_polynomial(f) ? VerifyMode::Exact : VerifyMode::Numeric;
  if (a.verify == "exact") mode = VerifyMode::Exact;
  else if (a.verify == "numeric") mode = VerifyMode::Numeric;
  else if (!a.verify.empty()) throw ValidationError("--verify must be exact or numeric");
  auto sol = solve_first_order(tree, f);
  auto rep = verify_first_order(tree, f, mode);
  Json j;
  j["u"] = sol(a.t, x);
  if (a.emit_eta) {
    Json eta = Json::array();
    for (const auto& e : sol.family().eta) eta.push_back(e.to_string());
    j["eta"] = eta;
  }
  j["verified"] = rep.verified;
  j["verify_mode"] = mode == VerifyMode::Exact ? "exact" : "numeric";
  return j;
}

struct HeatArgs {
  std::string tree, orders, f, box, eval, csv;
  int modes = 4, samples = 64, grid = 11;
};

Json cmd_solve_heat(const HeatArgs& a) {
  const auto tree = load_tree_file(a.tree);
  const int n = tree.size();
  const auto orders = parse_ints(a.orders, "--orders");
  const auto box = parse_doubles(a.box, "--box");
  const auto f = parse_expression(a.f, n);
  const auto point = parse_doubles(a.eval, "--eval");
  if (static_cast<int>(point.size()) != n + 1)
    throw ValidationError("--eval needs t and " + std::to_string(n) + " coordinates");
  if (a.grid < 2) throw ValidationError("--grid must be at least 2");
  auto sol = solve_heat(tree, orders, f, box, a.modes, a.samples);
  const double t = point[0];
  const std::vector<double> x(point.begin() + 1, point.end());
  int used = 0;
  for (const auto& m : sol.modes())
    if (std::abs(m.b) > kModeThreshold || std::abs(m.c) > kModeThreshold) ++used;
  Json j;
  j["u"] = sol(t, x);
  j["modes_used"] = used;
  j["verify_modes"] = verify_modes(tree, orders).ok;
  if (!a.csv.empty()) {
    if (std::pow(static_cast<double>(a.grid), n) > kMaxCsvPoints)
      throw GuardError("CSV grid exceeds 10^6 points");
    std::ofstream out(a.csv);
    if (!out) throw ValidationError("cannot write '" + a.csv + "'");
    out << "t";
    for (int r = 1; r <= n; ++r) out << ",x" << r;
    out << ",u\n";
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> y(static_cast<std::size_t>(n));
    while (true) {
      for (int r = 0; r < n; ++r) {
        const double half = box[static_cast<std::size_t>(r)];
        y[static_cast<std::size_t>(r)] = -half + 2 * half * idx[static_cast<std::size_t>(r)] / (a.grid - 1);
      }
      out << format_double(t);
      for (double v : y) out << ',' << format_double(v);
      out << ',' << format_double(sol(t, y)) << '\n';
      int r = n - 1;
      for (; r >= 0; --r) {
        if (++idx[static_cast<std::size_t>(r)] < a.grid) break;
        idx[static_cast<std::size_t>(r)] = 0;
      }
      if (r < 0) break;
    }
    j["csv"] = a.csv;
  }
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_to(j, out);
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree diagram Lie algebras, abelian ideals and evolution equations", "treelie"};
  app.require_subcommand(1);

  std::string tree_path, direction = "up";
  bool count_only = false;
  int bch_k = 6;
  FirstArgs fa;
  HeatArgs ha;

  auto* info = app.add_subcommand("info", "dimension, nilpotence and center");
  info->add_option("tree", tree_path, "tree JSON file")->required();
  info->add_option("--direction", direction, "up or down");

  auto* basis = app.add_subcommand("basis", "list the monomial basis");
  basis->add_option("tree", tree_path, "tree JSON file")->required();
  basis->add_option("--direction", direction, "up or down");

  auto* ideals = app.add_subcommand("ideals", "abelian ideals of the solvable extension");
  ideals->add_option("tree", tree_path, "tree JSON file")->required();
  ideals->add_option("--direction", direction, "up or down");
  ideals->add_flag("--count-only", count_only, "only count");

  auto* bch = app.add_subcommand("bch", "Campbell-Hausdorff coefficients a_0..a_K");
  bch->add_option("--k", bch_k, "order K")->required();

  auto* first = app.add_subcommand("solve-first", "first-order evolution u(t, x) = f(x + eta)");
  first->add_option("tree", fa.tree, "tree JSON file")->required();
  first->add_option("--f", fa.f, "initial value f(x1..xn)")->required();
  first->add_option("--t", fa.t, "time")->required();
  first->add_option("--x", fa.x, "comma-separated point")->required();
  first->add_flag("--emit-eta", fa.emit_eta, "include the eta polynomials");
  first->add_option("--verify", fa.verify, "exact or numeric");

  auto* heat = app.add_subcommand("solve-heat", "spectral solution of the heat-type equation");
  heat->add_option("tree", ha.tree, "tree JSON file")->required();
  heat->add_option("--orders", ha.orders, "derivative orders m1..mn")->required();
  heat->add_option("--f", ha.f, "initial value f(x1..xn)")->required();
  heat->add_option("--box", ha.box, "half-widths a1..an")->required();
  heat->add_option("--modes", ha.modes, "cutoff K");
  heat->add_option("--samples", ha.samples, "samples per axis N");
  heat->add_option("--eval", ha.eval, "t,x1..xn")->required();
  heat->add_option("--csv", ha.csv, "grid dump path");
  heat->add_option("--grid", ha.grid, "CSV points per axis");

  std::vector<const char*> argv{"treelie"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    Json result;
    if (info->parsed()) result = cmd_info(load_tree_file(tree_path), parse_direction(direction));
    else if (basis->parsed()) result = cmd_basis(load_tree_file(tree_path), parse_direction(direction));
    else if (ideals->parsed()) result = cmd_ideals(load_tree_file(tree_path), parse_direction(direction), count_only);
    else if (bch->parsed()) result = cmd_bch(bch_k);
    else if (first->parsed()) result = cmd_solve_first(fa);
    else if (heat->parsed()) result = cmd_solve_heat(ha);
    out << dump_json(result) << '\n';
    return 0;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace treelie
