#include <doctest.h>

#include <cmath>

#include "gfa/grid_law.hpp"

using namespace gfa;

namespace {
std::vector<double> uniform_cells(size_t n, double total) {
  return std::vector<double>(n, total / static_cast<double>(n));
}
}  // namespace

TEST_CASE("convolution of two unit uniforms is the exact triangle") {
  // U[0,1) + U[0,1) on a 0.01 grid; mass of cell [kh,(k+1)h) under the
  // triangle density is exact
  const size_t n = 100;
  const double h = 0.01;
  const auto a = uniform_cells(n, 1.0);
  const auto c = conv_cells(a, a, 400);
  REQUIRE(c.size() >= 2 * n);
  auto tri_cdf = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t <= 1.0) return 0.5 * t * t;
    if (t <= 2.0) return 1.0 - 0.5 * (2.0 - t) * (2.0 - t);
    return 1.0;
  };
  for (size_t k = 0; k < 2 * n; ++k) {
    const double expect = tri_cdf((k + 1) * h) - tri_cdf(k * h);
    CHECK(c[k] == doctest::Approx(expect).epsilon(1e-12));
  }
  double total = 0.0;
  for (double v : c) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("laplace transform of the stored representation") {
  GriddedLaw u;
  u.step = 0.01;
  u.cells = uniform_cells(100, 1.0);
  for (double s : {0.1, 0.5, 1.0, 3.0}) {
    const double expect = (1.0 - std::exp(-s)) / s;
    CHECK(u.laplace(s) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(u.laplace(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.mean() == doctest::Approx(0.5).epsilon(1e-13));

  GriddedLaw atom;
  atom.step = 0.01;
  atom.atoms.emplace_back(400, 0.25);  // mass 1/4 at t = 4
  CHECK(atom.laplace(0.5) == doctest::Approx(0.25 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(atom.mean() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ccdf excludes the atom at its own node") {
  GriddedLaw g;
  g.step = 0.5;
  g.atoms.emplace_back(2, 0.4);  // at t = 1.0
  g.cells = {0.3, 0.3};          // on [0, 1)
  const auto c = g.ccdf();
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(1.0));   // P(X > 0)
  CHECK(c[1] == doctest::Approx(0.7));   // P(X > 0.5)
  CHECK(c[2] == doctest::Approx(0.0));   // P(X > 1.0): atom at 1.0 not counted
}

TEST_CASE("add_shifted truncates and scales") {
  std::vector<double> out(5, 0.0);
  add_shifted(out, {1.0, 2.0, 3.0}, 3, 0.5);
  CHECK(out[3] == 0.5);
  CHECK(out[4] == 1.0);
  add_shifted(out, {1.0, 2.0}, -1, 1.0);
  CHECK(out[0] == 2.0);
}
