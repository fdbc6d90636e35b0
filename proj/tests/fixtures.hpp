#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "zeig/symtensor.hpp"

namespace fixtures {

inline zeig::SymmetricTensor example1() {
  zeig::EntryList e{3, 3, {}};
  auto add = [&](std::size_t i, std::size_t j, std::size_t k, double v) { e.entries.push_back({{i - 1, j - 1, k - 1}, v}); };
  add(1, 1, 1, -0.1281);
  add(1, 1, 2, 0.0516);
  add(1, 1, 3, -0.0954);
  add(1, 2, 2, -0.1958);
  add(1, 2, 3, -0.1790);
  add(1, 3, 3, -0.2676);
  add(2, 2, 2, 0.3251);
  add(2, 2, 3, 0.2513);
  add(2, 3, 3, 0.1773);
  add(3, 3, 3, 0.0338);
  return zeig::SymmetricTensor::from_entries(e);
}

inline zeig::SymmetricTensor example2() {
  zeig::EntryList e{4, 3, {}};
  auto add = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l, double v) {
    e.entries.push_back({{i - 1, j - 1, k - 1, l - 1}, v});
  };
  add(1, 1, 1, 1, 0.2883);
  add(1, 1, 1, 2, -0.0031);
  add(1, 1, 1, 3, 0.1973);
  add(1, 1, 2, 2, -0.2485);
  add(1, 1, 2, 3, -0.2939);
  add(1, 1, 3, 3, 0.3847);
  add(1, 2, 2, 2, 0.2972);
  add(1, 2, 2, 3, 0.1862);
  add(1, 2, 3, 3, 0.0919);
  add(1, 3, 3, 3, -0.3619);
  add(2, 2, 2, 2, 0.1241);
  add(2, 2, 2, 3, -0.3420);
  add(2, 2, 3, 3, 0.2127);
  add(2, 3, 3, 3, 0.2727);
  add(3, 3, 3, 3, -0.3054);
  return zeig::SymmetricTensor::from_entries(e);
}

inline std::vector<double> unit(std::vector<double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  for (double& v : x) v /= s;
  return x;
}

// Starting vectors quoted with the examples.
inline std::vector<double> ex1_start_08730() { return unit({-0.402911, 0.903051, -0.148865}); }
inline std::vector<double> ex1_start_00180() { return unit({0.638048, 0.45726, -0.619523}); }
inline std::vector<double> ex1_start_concave() { return unit({-0.627312, 0.38184, -0.678732}); }
inline std::vector<double> ex2_start_08893() { return unit({0.00106864, -0.0655103, -0.997851}); }
inline std::vector<double> ex2_start_m10954() { return unit({0.10571, 0.977667, -0.18164}); }
inline std::vector<double> ex2_start_03633() { return unit({0.357378, 0.670958, 0.649689}); }
inline std::vector<double> ex2_start_saddle() { return unit({0.339331, -0.78868, 0.512677}); }

// Random symmetric tensor with entries uniform in [-1, 1].
inline zeig::SymmetricTensor random_tensor(int m, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  zeig::EntryList e{m, n, {}};
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    e.entries.push_back({idx, u(rng)});
    int p = m - 1;
    while (p >= 0 && idx[p] == n - 1) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < m; ++q) idx[q] = idx[p];
  }
  return zeig::SymmetricTensor::from_entries(e);
}

inline zeig::SymmetricTensor diagonal4(std::size_t n) {
  zeig::EntryList e{4, n, {}};
  for (std::size_t i = 0; i < n; ++i) e.entries.push_back({{i, i, i, i}, 1.0});
  return zeig::SymmetricTensor::from_entries(e);
}

}  // namespace fixtures
