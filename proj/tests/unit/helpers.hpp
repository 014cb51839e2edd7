#pragma once

#include <initializer_list>

#include <Eigen/Dense>

#include "invsched/polytope.hpp"

namespace testing {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd M(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) M(i, j++) = x;
    ++i;
  }
  return M;
}

inline invsched::HPolytope interval(double lo, double hi) {
  return invsched::HPolytope::box(vec({lo}), vec({hi}));
}

}  // namespace testing
