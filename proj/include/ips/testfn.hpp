#pragma once
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ips/lattice.hpp"

namespace ips {

// A smooth (or piecewise) function on the unit torus, tabulated on the lattice
// together with its discrete derivatives:
//   grad_fwd[x] = n (f((x+1)/n) - f(x/n))        (bond x)
//   lap[x]      = n^2 (f((x+1)/n) + f((x-1)/n) - 2 f(x/n))
struct TestFunction {
  std::string name;
  std::vector<double> value;
  std::vector<double> grad_fwd;
  std::vector<double> lap;

  int n() const { return int(value.size()); }
};

inline TestFunction tabulate(const std::function<double(double)>& f, int n, std::string name) {
  if (n < 3) throw std::invalid_argument("test function needs n >= 3");
  TestFunction t;
  t.name = std::move(name);
  t.value.resize(n);
  for (int x = 0; x < n; ++x) t.value[x] = f(double(x) / n);
  t.grad_fwd.resize(n);
  t.lap.resize(n);
  for (int x = 0; x < n; ++x) {
    double up = t.value[(x + 1) % n], down = t.value[(x + n - 1) % n];
    t.grad_fwd[x] = double(n) * (up - t.value[x]);
    t.lap[x] = double(n) * double(n) * (up + down - 2.0 * t.value[x]);
  }
  return t;
}

// orthonormal Fourier basis on the torus: 1, sqrt(2) cos(2 pi k u),
// sqrt(2) sin(2 pi k u)
inline TestFunction fourier_cos(int k, int n) {
  if (k == 0) return tabulate([](double) { return 1.0; }, n, "const");
  const double tp = 2.0 * 3.14159265358979323846 * k;
  return tabulate([tp](double u) { return std::sqrt(2.0) * std::cos(tp * u); }, n,
                  "cos" + std::to_string(k));
}

inline TestFunction fourier_sin(int k, int n) {
  if (k <= 0) throw std::invalid_argument("sin mode needs k >= 1");
  const double tp = 2.0 * 3.14159265358979323846 * k;
  return tabulate([tp](double u) { return std::sqrt(2.0) * std::sin(tp * u); }, n,
                  "sin" + std::to_string(k));
}

// indicator of [a, b) on the torus; used by box and current estimators
inline TestFunction indicator_box(double a, double b, int n) {
  if (!(a >= 0 && a < b && b <= 1)) throw std::invalid_argument("bad box bounds");
  return tabulate([a, b](double u) { return (u >= a && u < b) ? 1.0 : 0.0; }, n, "box");
}

// squared l2 norms under the empirical measure (1/n) sum_x
inline double mean_square(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s / double(v.size());
}

}  // namespace ips
