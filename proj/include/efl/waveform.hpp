#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace efl {

/// Scalar time signal with two derivatives.  Drives the inflow fixtures.
class Waveform {
 public:
  struct Constant {
    double value = 0.0;
  };
  struct Ramp {
    double start = 0.0, rate = 0.0;
  };
  struct Sinusoid {
    double mean = 0.0, amplitude = 0.0, omega = 1.0, phase = 0.0;
  };
  struct SpikeTrain {
    double base = 0.0, amplitude = 0.0, width = 1.0;
    std::vector<double> times;  // strictly increasing
  };
  struct Custom {
    std::function<double(double)> f, d1, d2;
  };

  Waveform() : v_(Constant{0.0}) {}
  Waveform(Constant c) : v_(c) {}
  Waveform(Ramp r) : v_(r) {}
  Waveform(Sinusoid s) : v_(s) {}
  Waveform(SpikeTrain s);  // validates spike times
  Waveform(Custom c) : v_(std::move(c)) {}

  double operator()(double t) const { return eval(t, 0); }
  double eval(double t, int order) const;  // order 0..2
  bool steady() const;
  std::string describe() const;

 private:
  std::variant<Constant, Ramp, Sinusoid, SpikeTrain, Custom> v_;
};

/// Radial velocity profile with three derivatives.
class RadialProfile {
 public:
  struct Plug {
    double value = 0.0;
  };
  struct Parabolic {
    double peak = 0.0, radius = 1.0;  // peak * (1 - (r/radius)^2)
  };
  struct Poly {
    std::vector<double> coeffs;  // sum_k coeffs[k] r^k
  };
  struct Custom {
    std::function<double(double)> f, d1, d2, d3;
  };

  RadialProfile() : v_(Plug{0.0}) {}
  RadialProfile(Plug p) : v_(p) {}
  RadialProfile(Parabolic p);
  RadialProfile(Poly p) : v_(std::move(p)) {}
  RadialProfile(Custom c) : v_(std::move(c)) {}

  double operator()(double r) const { return eval(r, 0); }
  double eval(double r, int order) const;  // order 0..3
  std::string describe() const;

 private:
  std::variant<Plug, Parabolic, Poly, Custom> v_;
};

}  // namespace efl
