#include "efl/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace efl {

std::array<std::complex<double>, 4> j0_radial_jets(std::complex<double> k, double r) {
  if (r < 0.0) throw std::invalid_argument("j0_radial_jets: negative radius");

  using C = std::complex<double>;
  std::array<C, 4> s{C(0.0), C(0.0), C(0.0), C(0.0)};

  // c_m = (-1)^m (k/2)^(2m) / (m!)^2, via c_{m+1} = -c_m (k/2)^2 / (m+1)^2.
  const C q = -0.25 * k * k;
  C cm(1.0, 0.0);
  const double hump = 0.5 * std::abs(k) * r;

  for (int m = 0; m < 400; ++m) {
    const double tm = 2.0 * m;
    // r^(2m - p) with the falling factorial 2m (2m-1) ... (2m-p+1).
    double rp = (m == 0) ? 1.0 : std::pow(r, tm - 3.0);
    std::array<double, 4> fall_rpow{};
    if (m == 0) {
      fall_rpow = {1.0, 0.0, 0.0, 0.0};
    } else if (m == 1) {
      fall_rpow = {r * r, 2.0 * r, 2.0, 0.0};
    } else {
      fall_rpow[3] = tm * (tm - 1.0) * (tm - 2.0) * rp;
      rp *= r;
      fall_rpow[2] = tm * (tm - 1.0) * rp;
      rp *= r;
      fall_rpow[1] = tm * rp;
      rp *= r;
      fall_rpow[0] = rp;
    }

    double max_rel = 0.0;
    for (int p = 0; p < 4; ++p) {
      const C term = cm * fall_rpow[p];
      s[p] += term;
      const double ref = std::abs(s[0]) + 1e-300;
      max_rel = std::max(max_rel, std::abs(term) / ref);
    }

    if (m > hump + 4.0 && max_rel < 1e-14) return s;
    cm *= q / C((m + 1.0) * (m + 1.0));
  }
  throw std::runtime_error("j0_radial_jets: series did not converge (|k r| too large)");
}

}  // namespace efl
