#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "thinlayer/errors.hpp"

namespace thinlayer {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Solves the small interface systems (at most 7x7) by partial-pivot LU after
/// scaling every row to unit max-norm.
inline Vec solve_interface_system(Mat A, Vec rhs, const char* what = "interface system") {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double s = A.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) throw DegenerateError(std::string("degenerate geometry: empty row in ") + what);
    A.row(i) /= s;
    rhs(i) /= s;
  }
  Eigen::PartialPivLU<Mat> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-15))
    throw DegenerateError(std::string("degenerate geometry: singular ") + what +
                          " (rcond " + std::to_string(rcond) + ")");
  return lu.solve(rhs);
}

}  // namespace thinlayer
