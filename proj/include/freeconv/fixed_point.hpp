#pragma once

// Safeguarded Newton iteration for fixed points w = T(w) of analytic self-maps.

#include <algorithm>
#include <cmath>
#include <string>

#include "freeconv/dual.hpp"

namespace freeconv::detail {

struct FixedPoint {
  Cplx w;
  int iterations = 0;
  double defect = 0.0;
};

/// `map(w, Tw, dTw)` evaluates T and T'. A Newton step on T(w) - w is taken when
/// `admissible` accepts it and it lowers the defect; otherwise the plain step
/// w <- T(w) is used, which converges for self-maps with an attracting fixed point.
template <class Map, class Admissible>
FixedPoint solve_fixed_point(Map&& map, Admissible&& admissible, Cplx w0, double tol, int max_iter,
                             const char* what) {
  auto finite = [](Cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  Cplx w = w0;
  Cplx Tw, dT;
  map(w, Tw, dT);
  Cplx f = Tw - w;
  for (int it = 1; it <= max_iter; ++it) {
    Cplx next = Tw;
    if (dT != Cplx(1)) {
      Cplx newton = w - f / (dT - 1.0);
      if (finite(newton) && admissible(newton)) {
        try {
          Cplx Tn, dTn;
          map(newton, Tn, dTn);
          if (std::abs(Tn - newton) < std::abs(f)) next = newton;
        } catch (const Error&) {
        }
      }
    }
    double step = std::abs(next - w);
    w = next;
    map(w, Tw, dT);
    f = Tw - w;
    double scale = std::max(1.0, std::abs(w));
    if ((step < tol * scale && std::abs(f) < 1e3 * tol * scale) || std::abs(f) < 1e-3 * tol * scale)
      return {w, it, std::abs(f)};
  }
  throw Error(ErrorKind::NoConvergence,
              std::string(what) + " did not converge; last defect " + std::to_string(std::abs(f)));
}

}  // namespace freeconv::detail
