#pragma once

/// @file scalar_jet.hpp
/// Second-order truncated Taylor arithmetic in the three field variables
/// (r, z, t).  Propagating these jets through quotient expressions gives the
/// exact chain-rule derivatives of curve quantities without any sampling.

namespace efl {

struct Jet2 {
  double v = 0.0;
  double dr = 0.0, dz = 0.0, dt = 0.0;
  double drr = 0.0, drz = 0.0, dzz = 0.0;
  double drt = 0.0, dzt = 0.0, dtt = 0.0;

  static Jet2 constant(double c) { return Jet2{c, 0, 0, 0, 0, 0, 0, 0, 0, 0}; }

  /// The coordinates themselves as jets.
  static Jet2 radius(double r) { return Jet2{r, 1, 0, 0, 0, 0, 0, 0, 0, 0}; }
  static Jet2 axial(double z) { return Jet2{z, 0, 1, 0, 0, 0, 0, 0, 0, 0}; }
  static Jet2 time(double t) { return Jet2{t, 0, 0, 1, 0, 0, 0, 0, 0, 0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v,   a.dr + b.dr,   a.dz + b.dz,   a.dt + b.dt,   a.drr + b.drr,
          a.drz + b.drz, a.dzz + b.dzz, a.drt + b.drt, a.dzt + b.dzt, a.dtt + b.dtt};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v,   a.dr - b.dr,   a.dz - b.dz,   a.dt - b.dt,   a.drr - b.drr,
          a.drz - b.drz, a.dzz - b.dzz, a.drt - b.drt, a.dzt - b.dzt, a.dtt - b.dtt};
}

inline Jet2 operator*(double s, const Jet2& a) {
  return {s * a.v,   s * a.dr,  s * a.dz,  s * a.dt,  s * a.drr,
          s * a.drz, s * a.dzz, s * a.drt, s * a.dzt, s * a.dtt};
}

inline Jet2 operator*(const Jet2& a, double s) { return s * a; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 p;
  p.v = a.v * b.v;
  p.dr = a.dr * b.v + a.v * b.dr;
  p.dz = a.dz * b.v + a.v * b.dz;
  p.dt = a.dt * b.v + a.v * b.dt;
  p.drr = a.drr * b.v + 2.0 * a.dr * b.dr + a.v * b.drr;
  p.dzz = a.dzz * b.v + 2.0 * a.dz * b.dz + a.v * b.dzz;
  p.dtt = a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt;
  p.drz = a.drz * b.v + a.dr * b.dz + a.dz * b.dr + a.v * b.drz;
  p.drt = a.drt * b.v + a.dr * b.dt + a.dt * b.dr + a.v * b.drt;
  p.dzt = a.dzt * b.v + a.dz * b.dt + a.dt * b.dz + a.v * b.dzt;
  return p;
}

inline Jet2 reciprocal(const Jet2& g) {
  const double iv = 1.0 / g.v;
  const double iv2 = iv * iv;
  const double iv3 = iv2 * iv;
  Jet2 h;
  h.v = iv;
  h.dr = -g.dr * iv2;
  h.dz = -g.dz * iv2;
  h.dt = -g.dt * iv2;
  h.drr = (2.0 * g.dr * g.dr - g.drr * g.v) * iv3;
  h.dzz = (2.0 * g.dz * g.dz - g.dzz * g.v) * iv3;
  h.dtt = (2.0 * g.dt * g.dt - g.dtt * g.v) * iv3;
  h.drz = (2.0 * g.dr * g.dz - g.drz * g.v) * iv3;
  h.drt = (2.0 * g.dr * g.dt - g.drt * g.v) * iv3;
  h.dzt = (2.0 * g.dz * g.dt - g.dzt * g.v) * iv3;
  return h;
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

}  // namespace efl
