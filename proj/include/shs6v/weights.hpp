#pragma once

#include <vector>

#include "shs6v/qspecial.hpp"

namespace shs6v {

enum class Precision { Double, DoubleDouble };

// General fused L-matrix entry L_alpha^{(J)}(i1, j1; i2, j2).
double l_general(const ModelParams& p, double alpha, int J, int i1, int j1, int i2, int j2,
                 Precision prec = Precision::Double);

// J = 1 closed form; m is the site occupancy.
double l_j1(const ModelParams& p, double alpha_t, int m, int j1, int i2, int j2);

struct VertexWeightTable {
  ModelParams params;
  double alpha_used = 0.0;
  int J_used = 1;
  std::vector<double> entries;
  double max_row_dev = 0.0;
  int renormalized_rows = 0;
  int warned_rows = 0;

  int ni() const { return params.I + 1; }
  int nj() const { return J_used + 1; }
  double at(int i1, int j1, int i2, int j2) const {
    return entries[((size_t(i1) * nj() + j1) * ni() + i2) * nj() + j2];
  }
  double& at(int i1, int j1, int i2, int j2) {
    return entries[((size_t(i1) * nj() + j1) * ni() + i2) * nj() + j2];
  }
};

// Rows with deviation > 1e-8 throw StochasticityError when validate is set.
VertexWeightTable build_table(const ModelParams& p, double alpha, int J, bool validate = true,
                              Precision prec = Precision::Double);

}  // namespace shs6v
