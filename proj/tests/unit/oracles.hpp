#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "ggwpd/types.hpp"

namespace oracle {

// composite Simpson rule on [a, b] with n (even) panels
inline ggwpd::Complex simpson(const std::function<ggwpd::Complex(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  ggwpd::Complex s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// relative difference with an absolute floor
inline double rel(ggwpd::Complex a, ggwpd::Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
