#pragma once

// Small hand-rolled generators for property tests. Every case is derived
// from a seed so failures reproduce from the printed seed alone.

#include <cstdint>
#include <vector>

#include "entroad/random.hpp"
#include "entroad/xreal.hpp"

namespace entroad::testing {

inline ExtReal any_ext_real(Rng& rng) {
  switch (rng.index(6)) {
    case 0:
      return ExtReal::pos_inf();
    case 1:
      return ExtReal::neg_inf();
    case 2:
      return 0.0;
    default:
      return rng.uniform(-100.0, 100.0);
  }
}

inline double any_lambda(Rng& rng) {
  switch (rng.index(5)) {
    case 0:
      return 0.0;
    case 1:
      return 1.0;
    default:
      return rng.uniform();
  }
}

inline std::vector<double> positive_vector(Rng& rng, std::size_t n, double lo = 0.2, double hi = 3.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace entroad::testing
