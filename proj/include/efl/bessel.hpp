#pragma once

#include <array>
#include <complex>

namespace efl {

/// d^p/dr^p [ J0(k r) ] for p = 0..3, complex wavenumber k, real r >= 0.
///
/// Evaluated from the entire power series J0(x) = sum_m (-1)^m (x/2)^(2m) / (m!)^2
/// with term-wise differentiation, so there is no J1 call and no 0/0 at the
/// axis.  Terms are accumulated until they fall below 1e-14 of the running
/// value sum (and past the magnitude hump at m ~ |k r|/2).  Accurate for
/// |k r| up to ~40, far beyond the supported Womersley range.
std::array<std::complex<double>, 4> j0_radial_jets(std::complex<double> k, double r);

}  // namespace efl
