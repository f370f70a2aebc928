#include "efl/waveform.hpp"

#include <cmath>
#include <sstream>

#include "efl/errors.hpp"

namespace efl {

Waveform::Waveform(SpikeTrain s) : v_(std::move(s)) {
  const auto& sp = std::get<SpikeTrain>(v_);
  if (!(sp.width > 0.0)) throw ConfigError("spike_train width must be positive");
  for (size_t i = 1; i < sp.times.size(); ++i)
    if (!(sp.times[i] > sp.times[i - 1]))
      throw ConfigError("spike_train times must be strictly increasing");
}

double Waveform::eval(double t, int order) const {
  if (order < 0 || order > 2) throw std::invalid_argument("Waveform: order must be 0..2");
  return std::visit(
      [&](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return order == 0 ? w.value : 0.0;
        } else if constexpr (std::is_same_v<T, Ramp>) {
          if (order == 0) return w.start + w.rate * t;
          return order == 1 ? w.rate : 0.0;
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          const double ph = w.omega * t + w.phase;
          switch (order) {
            case 0: return w.mean + w.amplitude * std::sin(ph);
            case 1: return w.amplitude * w.omega * std::cos(ph);
            default: return -w.amplitude * w.omega * w.omega * std::sin(ph);
          }
        } else if constexpr (std::is_same_v<T, SpikeTrain>) {
          double acc = (order == 0) ? w.base : 0.0;
          for (double tk : w.times) {
            const double u = (t - tk) / w.width;
            const double g = w.amplitude * std::exp(-0.5 * u * u);
            switch (order) {
              case 0: acc += g; break;
              case 1: acc += -u / w.width * g; break;
              default: acc += (u * u - 1.0) / (w.width * w.width) * g; break;
            }
          }
          return acc;
        } else {
          switch (order) {
            case 0: return w.f(t);
            case 1: return w.d1(t);
            default: return w.d2(t);
          }
        }
      },
      v_);
}

bool Waveform::steady() const {
  if (std::holds_alternative<Constant>(v_)) return true;
  if (const auto* r = std::get_if<Ramp>(&v_)) return r->rate == 0.0;
  if (const auto* s = std::get_if<Sinusoid>(&v_)) return s->amplitude == 0.0;
  if (const auto* s = std::get_if<SpikeTrain>(&v_)) return s->times.empty() || s->amplitude == 0.0;
  return false;
}

std::string Waveform::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, Constant>)
          os << "constant(" << w.value << ")";
        else if constexpr (std::is_same_v<T, Ramp>)
          os << "ramp(start=" << w.start << ", rate=" << w.rate << ")";
        else if constexpr (std::is_same_v<T, Sinusoid>)
          os << "sinusoid(mean=" << w.mean << ", amplitude=" << w.amplitude
             << ", omega=" << w.omega << ", phase=" << w.phase << ")";
        else if constexpr (std::is_same_v<T, SpikeTrain>)
          os << "spike_train(base=" << w.base << ", amplitude=" << w.amplitude
             << ", width=" << w.width << ", n_spikes=" << w.times.size() << ")";
        else
          os << "custom";
      },
      v_);
  return os.str();
}

RadialProfile::RadialProfile(Parabolic p) : v_(p) {
  if (!(p.radius > 0.0)) throw ConfigError("parabolic profile radius must be positive");
}

double RadialProfile::eval(double r, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("RadialProfile: order must be 0..3");
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Plug>) {
          return order == 0 ? p.value : 0.0;
        } else if constexpr (std::is_same_v<T, Parabolic>) {
          const double s = p.peak / (p.radius * p.radius);
          switch (order) {
            case 0: return p.peak - s * r * r;
            case 1: return -2.0 * s * r;
            case 2: return -2.0 * s;
            default: return 0.0;
          }
        } else if constexpr (std::is_same_v<T, Poly>) {
          double acc = 0.0;
          for (size_t k = 0; k < p.coeffs.size(); ++k) {
            const int ik = static_cast<int>(k);
            if (ik < order) continue;
            double fall = 1.0;
            for (int j = 0; j < order; ++j) fall *= ik - j;
            acc += p.coeffs[k] * fall * std::pow(r, ik - order);
          }
          return acc;
        } else {
          switch (order) {
            case 0: return p.f(r);
            case 1: return p.d1(r);
            case 2: return p.d2(r);
            default: return p.d3(r);
          }
        }
      },
      v_);
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Plug>)
          os << "plug(" << p.value << ")";
        else if constexpr (std::is_same_v<T, Parabolic>)
          os << "parabolic(peak=" << p.peak << ", radius=" << p.radius << ")";
        else if constexpr (std::is_same_v<T, Poly>)
          os << "poly(degree=" << (p.coeffs.empty() ? 0 : p.coeffs.size() - 1) << ")";
        else
          os << "custom";
      },
      v_);
  return os.str();
}

}  // namespace efl
