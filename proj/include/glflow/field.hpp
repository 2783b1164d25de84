#pragma once

#include <complex>
#include <vector>

#include "glflow/grid.hpp"

namespace glflow {

using cplx = std::complex<double>;

// Complex order-parameter sample on a GridSpec.  Storage is row-major with
// the last axis fastest: idx = (i*n1 + j)*n2 + k in 3-d, i*n1 + j in 2-d.
struct ComplexField {
  GridSpec grid;
  double t = 0.0;
  std::vector<cplx> a;

  ComplexField() = default;
  explicit ComplexField(const GridSpec& g, cplx fill = {0.0, 0.0})
      : grid(g), a(g.cells(), fill) {}

  std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(i) * grid.n[1] + j) * grid.n[2] + k;
  }
  cplx& at(int i, int j, int k = 0) { return a[index(i, j, k)]; }
  const cplx& at(int i, int j, int k = 0) const { return a[index(i, j, k)]; }

  // Grid-point coordinate along an axis, in [0, L).
  double coord(int /*axis*/, int idx) const { return grid.h * idx; }

  std::size_t size() const { return a.size(); }
};

// Decode a flat storage index into per-axis indices.
inline void decode_index(const GridSpec& g, std::size_t idx, int& i, int& j,
                         int& k) {
  k = static_cast<int>(idx % g.n[2]);
  std::size_t r = idx / g.n[2];
  j = static_cast<int>(r % g.n[1]);
  i = static_cast<int>(r / g.n[1]);
}

}  // namespace glflow
