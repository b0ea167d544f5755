#ifndef QDL_REPORT_HPP
#define QDL_REPORT_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "qdl/core.hpp"

namespace qdl {

// One residual comparison: left side by quadrature, right side in closed form.
struct ResidualReport {
  std::string id;  // equation tag this case certifies
  std::vector<std::pair<std::string, cplx>> parameters;
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double quadrature_error = 0.0;
  double regulator_spread = 0.0;
  std::string note;

  void finish() {
    abs_residual = std::abs(lhs - rhs);
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    rel_residual = scale > 0.0 ? abs_residual / scale : abs_residual;
  }
};

}  // namespace qdl

#endif  // QDL_REPORT_HPP
