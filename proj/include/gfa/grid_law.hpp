#pragma once

#include <cstddef>
#include <vector>

namespace gfa {

// Mixed law on a uniform grid: point masses pinned to grid nodes plus a
// continuous part stored as per-cell masses, cell k covering
// [k*step, (k+1)*step). Cell masses are exact whenever the inputs are
// uniform inside their cells; convolution of two cell parts splits each
// product triangle evenly between its two target cells.
struct GriddedLaw {
  double step = 0.01;
  std::vector<std::pair<int64_t, double>> atoms;  // (grid node, mass)
  std::vector<double> cells;                      // mass per cell

  double total_mass() const;
  double mean() const;
  // Laplace transform of the stored representation (atoms exact,
  // cells treated as uniform densities).
  double laplace(double s) const;
  // P(X > k*step) for k = 0..cells.size()
  std::vector<double> ccdf() const;
};

// Continuous-part convolution with the triangle split; output truncated
// to max_cells.
std::vector<double> conv_cells(const std::vector<double>& a, const std::vector<double>& b,
                               size_t max_cells);

// out += coef * shift(src, by)  (truncating at out.size())
void add_shifted(std::vector<double>& out, const std::vector<double>& src, int64_t by,
                 double coef);

}  // namespace gfa
