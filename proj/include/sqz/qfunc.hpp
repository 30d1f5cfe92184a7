#pragma once

#include <string>
#include <vector>

#include "sqz/spinfock.hpp"

namespace sqz {

struct QAxis {
  std::string name;
  double lo = 0.0, hi = 0.0;
  int points = 0;
  double at(int i) const { return points > 1 ? lo + (hi - lo) * i / (points - 1) : lo; }
};

struct QGrid {
  enum class Kind { field, spin };
  Kind kind = Kind::field;
  QAxis first, second;        // (Re a, Im a) or (theta, phi)
  std::vector<double> values;  // first-major: values[i * second.points + k]

  double value(int i, int k) const { return values[std::size_t(i) * second.points + k]; }
  // Trapezoid integral over the grid; spin grids include the sin(theta) measure.
  double integral() const;
};

struct FieldGridSpec {
  cplx center = 0.0;
  double half_width = 5.0;
  int points = 201;
};

struct SpinGridSpec {
  int theta_points = 181;
  int phi_points = 361;
};

QGrid qfunc_field(const CMat& rho_f, const FieldGridSpec& spec = {});
QGrid qfunc_spin(const CMat& rho_a, const SpinGridSpec& spec = {});

}  // namespace sqz
