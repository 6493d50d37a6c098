// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "treelie/cli.hpp"
#include "treelie/first.hpp"
#include "treelie/heat.hpp"
#include "treelie/ideals.hpp"

using namespace treelie;
using std::numbers::pi;

namespace {

/// Collects failures for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int report(int number, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  std::cout << (c.failures.empty() ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
  if (!c.failures.empty()) {
    std::cout << " (" << c.failures.size() << " mismatches; first: " << c.failures.front() << ")";
  }
  std::cout << std::endl;
  return c.failures.empty() ? 0 : 1;
}

long long count(const TreeDiagram& t, Direction dir) {
  return static_cast<long long>(enumerate_ideals(t, dir).size());
}

std::vector<std::vector<Root>> canonical(std::vector<std::vector<Root>> v) {
  for (auto& I : v) std::sort(I.begin(), I.end());
  std::sort(v.begin(), v.end(), ideal_less);
  return v;
}

std::vector<int> symplectic_weights(int n) {
  std::vector<int> d(static_cast<std::size_t>(n - 1), 1);
  d.back() = 2;
  return d;
}

MultiPoly X(int i) { return MultiPoly::var(Symbol::x(i)); }
MultiPoly T() { return MultiPoly::var(Symbol::t()); }
MultiPoly Z(int i) { return MultiPoly::var(Symbol::z(i)); }

MultiPoly random_cubic(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> var(1, n), coeff(-3, 3), deg(0, 3);
  MultiPoly f;
  for (int k = 0; k < 5; ++k) {
    MultiPoly term(coeff(rng));
    int d = deg(rng);
    for (int e = 0; e < d; ++e) term *= X(var(rng));
    f += term;
  }
  return f;
}

std::string tree_file(const std::string& name, const TreeDiagram& t) {
  auto dir = std::filesystem::temp_directory_path() / "treelie_acceptance";
  std::filesystem::create_directories(dir);
  auto path = dir / (name + ".json");
  std::ofstream(path) << tree_to_json(t);
  return path.string();
}

std::pair<int, std::string> cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str()};
}

}  // namespace

int main() {
  int failed = 0;
  const auto corpus_trees = corpus::trees();
  const Direction dirs[] = {Direction::Up, Direction::Down};

  failed += report(1, "abelian-ideal counts for chains", [](Check& c) {
    auto start = std::chrono::steady_clock::now();
    for (int n = 2; n <= 5; ++n)
      c.expect(count(corpus::all_ones_chain(n), Direction::Up) == (1LL << n), "A_" + std::to_string(n));
    for (int n = 2; n <= 4; ++n)
      c.expect(count(corpus::chain(symplectic_weights(n)), Direction::Up) == (1LL << n),
               "symplectic n=" + std::to_string(n));
    for (int m = 3; m <= 4; ++m)
      c.expect(count(corpus::chain({1, m}), Direction::Up) == (1LL << (m + 1)), "A_3 (1," + std::to_string(m) + ")");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s");
  });

  failed += report(2, "E-tree (2,2,1) with a weight-2 edge has 64 ideals, oracle agrees", [](Check& c) {
    auto t = TreeDiagram::build(5, {{1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {3, 5, 2}});
    auto ideals = enumerate_ideals(t, Direction::Up);
    c.expect(static_cast<long long>(ideals.size()) == oracle::e_tree_ideal_count(2, 2, 1), "closed form");
    c.expect(ideals.size() == 64, "count " + std::to_string(ideals.size()));
    c.expect(count_ideals(t, Direction::Up) == BigInt(64), "count mode");
    std::vector<std::vector<Root>> listed;
    for (const auto& I : ideals) listed.push_back(I.roots);
    c.expect(canonical(listed) == canonical(brute_force_ideals(t, Direction::Up)), "brute force");
  });

  failed += report(3, "maximal-ideal counts", [](Check& c) {
    auto expect_count = [&](const TreeDiagram& t, Direction dir, std::size_t want, const std::string& what) {
      auto exact = exact_maximal_ideals(t, dir).size();
      auto closed = maximal_ideals(t, dir).size();
      c.expect(exact == want, what + ": " + std::to_string(exact) + " maximal abelian ideals, expected " +
                                  std::to_string(want) + " (I(S) construction gives " + std::to_string(closed) + ")");
    };
    for (int n = 2; n <= 5; ++n)
      expect_count(corpus::all_ones_chain(n), Direction::Up, static_cast<std::size_t>(n), "A_" + std::to_string(n));
    for (int n = 2; n <= 4; ++n)
      expect_count(corpus::chain(symplectic_weights(n)), Direction::Up, 1, "symplectic n=" + std::to_string(n));
    expect_count(corpus::e_tree(2, 1, 1), Direction::Down, 3, "E^2_{1,1} down");
    for (auto [n0, n1, n2] : std::vector<std::tuple<int, int, int>>{{3, 1, 1}, {2, 2, 1}, {2, 2, 2}})
      expect_count(corpus::e_tree(n0, n1, n2), Direction::Down, static_cast<std::size_t>(n0 + n1 * n2),
                   "E-tree " + std::to_string(n0) + std::to_string(n1) + std::to_string(n2) + " down");
  });

  failed += report(4, "enumerator and brute-force oracle agree on the corpus", [&](Check& c) {
    c.expect(corpus_trees.size() >= 12, "corpus size");
    for (const auto& [name, t] : corpus_trees)
      for (Direction dir : dirs) {
        c.expect(t.size() <= 6 && corpus::root_count(t, dir) <= 16, name + " outside corpus bounds");
        std::vector<std::vector<Root>> listed;
        for (const auto& I : enumerate_ideals(t, dir)) listed.push_back(I.roots);
        c.expect(canonical(listed) == canonical(brute_force_ideals(t, dir)),
                 name + " " + direction_name(dir));
      }
  });

  failed += report(5, "basis sizes match the closed-form dimensions", [&](Check& c) {
    for (const auto& [name, t] : corpus_trees)
      for (Direction dir : dirs)
        c.expect(static_cast<long long>(enumerate_basis(t, dir).size()) == dim_and_nilpotence(t, dir).dim,
                 name + " " + direction_name(dir));
    auto a3 = corpus::chain({1, 2});
    c.expect(oracle::chain_up_dim(3, 2) == 9 && enumerate_basis(a3, Direction::Up).size() == 9, "A_3 (1,2) up");
    auto e = corpus::e_tree(2, 1, 1);
    c.expect(oracle::e_tree_down_dim(2, 1, 1) == 9 && enumerate_basis(e, Direction::Down).size() == 9, "E^2_{1,1}");
    auto heavy = corpus::e_tree(2, 1, 1, {{1, 2, 2}});
    c.expect(oracle::e_tree_down_dim_heavy(2, 1, 1, 2) == 15 && enumerate_basis(heavy, Direction::Down).size() == 15,
             "E^2_{1,1} weight 2");
  });

  failed += report(6, "central-series length and center against the closed forms", [&](Check& c) {
    for (const auto& [name, t] : corpus_trees)
      for (Direction dir : dirs) {
        auto rep = verify_structure(t, dir);
        auto printed = dim_and_nilpotence(t, dir).nilpotence;
        c.expect(rep.central_series_length() == printed,
                 name + " " + direction_name(dir) + ": central series length " +
                     std::to_string(rep.central_series_length()) + " vs closed form " + std::to_string(printed));
        c.expect(rep.center_matches, name + " " + direction_name(dir) + ": center");
      }
  });

  failed += report(7, "BCH coefficients", [](Check& c) {
    auto bch = bch_coefficients(6);
    for (int k = 0; k <= 6; ++k)
      c.expect(bch.a[static_cast<std::size_t>(k)] == oracle::bch_double_sum(k), "a_" + std::to_string(k));
    for (int d = 0; d <= 6; ++d) {
      Rational s;
      for (int k = 0; k <= d; ++k) s += bch.a[static_cast<std::size_t>(k)] * bch.theta[static_cast<std::size_t>(d - k)];
      c.expect(s == Rational(d == 0 ? 1 : 0), "series product degree " + std::to_string(d));
    }
  });

  failed += report(8, "first-order solver", [&](Check& c) {
    std::mt19937 rng(8);
    for (const auto& [name, t] : corpus_trees) {
      const auto fam = eta_family(t);
      for (int trial = 0; trial < 3; ++trial) {
        auto f = random_cubic(rng, t.size());
        c.expect(first_order_residual(t, first_order_polynomial(fam, f)).is_zero(), name + ": exact residual");
      }
      auto rep = verify_first_order(t, parse_expression("x1", t.size()), VerifyMode::Numeric);
      c.expect(rep.samples == 100 && rep.max_error <= 1e-6, name + ": RK4 error " + std::to_string(rep.max_error));
      for (const auto& p : semigroup_defect(fam)) c.expect(p.is_zero(), name + ": semigroup");
    }
  });

  failed += report(9, "heat solver", [&](Check& c) {
    auto xi = xi_family(corpus::all_ones_chain(2), {2, 2});
    c.expect(xi.xi_tilde_of(1) ==
                 T() * Z(1).pow(2) + T().pow(2) * Z(1) * Z(2).pow(2) + MultiPoly(Rational(1, 3)) * T().pow(3) * Z(2).pow(4),
             "xi tilde 1");
    c.expect(xi.xi_tilde_of(2) == T() * Z(2).pow(2), "xi tilde 2");

    for (const auto& [name, t] : corpus_trees) {
      const int n = t.size();
      std::vector<int> m(static_cast<std::size_t>(n), 1);
      while (true) {
        c.expect(verify_modes(t, m).residual.is_zero(), name + ": mode identity");
        int r = n - 1;
        for (; r >= 0; --r) {
          if (++m[static_cast<std::size_t>(r)] <= 3) break;
          m[static_cast<std::size_t>(r)] = 1;
        }
        if (r < 0) break;
      }
    }

    HeatSolution modes(xi, {1.0, 1.0}, {});
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ut(0.0, 0.2), ux(-1.0, 1.0);
    double worst = 0.0;
    for (int k1 = 0; k1 <= 2; ++k1)
      for (int k2 = -2; k2 <= 2; ++k2)
        for (int s = 0; s < 20; ++s) {
          FourierMode fm{{k1, k2}, 1.0, 0.0, 1.0};
          const double tt = ut(rng), x1 = ux(rng), x2 = ux(rng);
          auto kappa = wave_numbers(fm.k, {1.0, 1.0});
          const double K1 = std::abs(kappa[0]), K2 = std::abs(kappa[1]);
          const double rate_t = K1 * K1 + std::pow(K2, 4) * 0.25 * 0.25 + K2 * K2 + 2 * K1 * K2 * K2 * 0.25;
          const double rate_x = K1 + K2 * K2 * 0.25 + K2;
          for (int part = 0; part < 2; ++part) {
            auto val = [&](double t0, double a, double b) {
              auto v = modes.mode_values(fm, t0, {a, b});
              return part == 0 ? v.first : v.second;
            };
            worst = std::max(worst, oracle::chain22_residual(val, tt, x1, x2, rate_t, rate_x));
          }
        }
    c.expect(worst <= 1e-4, "finite-difference residual " + std::to_string(worst));

    const std::vector<double> box{1.0, 0.5};
    auto f = parse_expression("1/2 + cos(2*pi*x1) - 3*sin(4*pi*x2) + cos(2*pi*x1)*sin(4*pi*x2)", 2);
    auto sol = solve_heat(corpus::all_ones_chain(2), {2, 2}, f, box, 2, 16);
    double err = 0.0;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        std::vector<double> x{-box[0] + 2 * box[0] * i / 9.0, -box[1] + 2 * box[1] * j / 9.0};
        err = std::max(err, std::abs(sol(0.0, x) - eval(f, x)));
      }
    c.expect(err <= 1e-8, "t=0 recovery error " + std::to_string(err));

    auto one = fourier_coefficients([](const std::vector<double>&) { return 1.0; }, box, 2, 16);
    auto cosine = fourier_coefficients([&](const std::vector<double>& x) { return std::cos(2 * pi * x[0] / box[0]); },
                                       box, 2, 16);
    for (const auto& fm : one) {
      bool zero = std::all_of(fm.k.begin(), fm.k.end(), [](int v) { return v == 0; });
      c.expect(std::abs(fm.b - (zero ? 1.0 : 0.0)) <= 1e-12 && std::abs(fm.c) <= 1e-12, "f=1 normalization");
    }
    for (const auto& fm : cosine) {
      bool hit = fm.k == std::vector<int>{1, 0};
      c.expect(std::abs(fm.b - (hit ? 1.0 : 0.0)) <= 1e-12 && std::abs(fm.c) <= 1e-12, "cosine normalization");
    }
  });

  failed += report(10, "command-line examples and determinism", [](Check& c) {
    auto a3 = tree_file("a3_12", corpus::chain({1, 2}));
    auto a2 = tree_file("a2", corpus::all_ones_chain(2));
    const std::vector<std::vector<std::string>> runs{
        {"info", a3, "--direction", "up"}, {"ideals", a2, "--direction", "up", "--count-only"}, {"bch", "--k", "3"}};
    std::vector<nlohmann::json> out;
    for (const auto& args : runs) {
      auto [code, text] = cli(args);
      c.expect(code == 0, args[0] + " exit code");
      c.expect(cli(args).second == text, args[0] + " not deterministic");
      out.push_back(nlohmann::json::parse(text));
    }
    c.expect(out[0]["dim"] == 9 && out[0]["nilpotence"] == 4 && out[0]["center"] == nlohmann::json::array({"d3"}),
             "info values");
    c.expect(out[1]["count"] == 4, "ideals count");
    c.expect(out[2]["a"] == nlohmann::json::array({"1", "1/2", "1/12", "0"}), "bch values");
  });

  return failed == 0 ? 0 : 1;
}
