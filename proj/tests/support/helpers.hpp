#pragma once

#include "pdeit/geometry.hpp"

#include <random>

namespace pdeit::testing {

inline double rel_l2(const VectorXcd& got, const VectorXcd& want) {
  return (got - want).norm() / want.norm();
}

inline double rel_fro(const MatrixXcd& got, const MatrixXcd& want) {
  return (got - want).norm() / want.norm();
}

inline VectorXcd random_complex_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(dist(rng), dist(rng));
  return v;
}

}  // namespace pdeit::testing
