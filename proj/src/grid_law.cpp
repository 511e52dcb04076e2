#include "gfa/grid_law.hpp"

#include <cmath>

namespace gfa {

double GriddedLaw::total_mass() const {
  double m = 0.0;
  for (const auto& [idx, w] : atoms) m += w;
  for (double c : cells) m += c;
  return m;
}

double GriddedLaw::mean() const {
  double m = 0.0;
  for (const auto& [idx, w] : atoms) m += w * static_cast<double>(idx) * step;
  for (size_t k = 0; k < cells.size(); ++k)
    m += cells[k] * (static_cast<double>(k) + 0.5) * step;
  return m;
}

double GriddedLaw::laplace(double s) const {
  double v = 0.0;
  for (const auto& [idx, w] : atoms) v += w * std::exp(-s * static_cast<double>(idx) * step);
  if (s == 0.0) {
    for (double c : cells) v += c;
    return v;
  }
  const double cell_factor = (1.0 - std::exp(-s * step)) / (s * step);
  for (size_t k = 0; k < cells.size(); ++k)
    v += cells[k] * std::exp(-s * static_cast<double>(k) * step) * cell_factor;
  return v;
}

std::vector<double> GriddedLaw::ccdf() const {
  std::vector<double> out(cells.size() + 1);
  const double total = total_mass();
  // tail sum from the right keeps the small tail values exact
  double tail = 0.0;
  out[cells.size()] = 0.0;
  for (size_t k = cells.size(); k-- > 0;) {
    tail += cells[k];
    out[k] = tail;
  }
  // atoms at node k belong to P(X > t) only for t < k*step
  for (const auto& [idx, w] : atoms) {
    for (int64_t k = 0; k < idx && k <= static_cast<int64_t>(cells.size()); ++k) out[k] += w;
  }
  // ccdf(0) should equal total mass for nonnegative laws
  (void)total;
  return out;
}

std::vector<double> conv_cells(const std::vector<double>& a, const std::vector<double>& b,
                               size_t max_cells) {
  if (a.empty() || b.empty()) return {};
  size_t n = std::min(max_cells, a.size() + b.size());
  // raw lattice convolution r[m] = sum a_i b_j over i+j=m, one slot longer
  // than needed so the half-shift below stays in range
  std::vector<double> r(std::min(max_cells + 1, a.size() + b.size() - 1), 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const size_t jmax = std::min(b.size(), r.size() - i);
    const double* bp = b.data();
    double* rp = r.data() + i;
    for (size_t j = 0; j < jmax; ++j) rp[j] += ai * bp[j];
  }
  std::vector<double> out(n, 0.0);
  for (size_t m = 0; m < n; ++m) {
    double v = 0.0;
    if (m < r.size()) v += r[m];
    if (m >= 1 && m - 1 < r.size()) v += r[m - 1];
    out[m] = 0.5 * v;
  }
  return out;
}

void add_shifted(std::vector<double>& out, const std::vector<double>& src, int64_t by,
                 double coef) {
  if (coef == 0.0) return;
  for (size_t k = 0; k < src.size(); ++k) {
    int64_t target = static_cast<int64_t>(k) + by;
    if (target < 0) continue;
    if (target >= static_cast<int64_t>(out.size())) break;
    out[static_cast<size_t>(target)] += coef * src[k];
  }
}

}  // namespace gfa
