#pragma once

#include <cmath>

namespace ppreg {

// Neumaier-compensated accumulator: keeps a running correction so that sums
// of terms with heavy cancellation lose only the rounding already present in
// the terms themselves.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace ppreg
