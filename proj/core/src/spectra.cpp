// Copyright 2026 The ffcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "ffcorr/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ffcorr/errors.hpp"
#include "ffcorr/pulse.hpp"

namespace ffcorr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// int_a^b w^n dw for 0 < a <= b.
double power_integral(double a, double b, double n) {
  if (b <= a) return 0.0;
  const double e = n + 1.0;
  const double log_ratio = std::log(b / a);
  if (std::abs(e * log_ratio) < 1e-14) return std::pow(a, e) * log_ratio;
  return std::pow(a, e) * std::expm1(e * log_ratio) / e;
}

// Piece i of a tabulated spectrum, integrated against w^q over [a, b].
double tabulated_piece_integral(const TabulatedSpectrum& t, std::size_t i, double a, double b,
                                double q) {
  if (b <= a) return 0.0;
  const double w0 = t.omega[i], w1 = t.omega[i + 1];
  const double s0 = t.psd[i], s1 = t.psd[i + 1];
  if (s0 == 0.0 && s1 == 0.0) return 0.0;
  if (s0 > 0.0 && s1 > 0.0) {
    // S = s0 (w / w0)^p
    const double p = std::log(s1 / s0) / std::log(w1 / w0);
    return s0 * std::pow(w0, -p) * power_integral(a, b, p + q);
  }
  // Linear interpolation when an endpoint vanishes: S = alpha + beta w.
  const double beta = (s1 - s0) / (w1 - w0);
  const double alpha = s0 - beta * w0;
  return alpha * power_integral(a, b, q) + beta * power_integral(a, b, q + 1.0);
}

// int_a^b S(w) w^q dw for a tabulated spectrum, 0 < a <= b.
double tabulated_integral(const TabulatedSpectrum& t, double a, double b, double q) {
  a = std::max(a, t.omega.front());
  b = std::min(b, t.omega.back());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.omega.size(); ++i) {
    const double lo = std::max(a, t.omega[i]);
    const double hi = std::min(b, t.omega[i + 1]);
    if (hi > lo) total += tabulated_piece_integral(t, i, lo, hi, q);
  }
  return total;
}

void require_finite_nonneg(double v, const std::string& what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(what + " must be finite and non-negative");
  }
}

}  // namespace

SpectralDensity SpectralDensity::white(double psd) {
  require_finite_nonneg(psd, "white PSD");
  return SpectralDensity(WhiteSpectrum{psd});
}

SpectralDensity SpectralDensity::power_law(double amplitude, double exponent, double omega_min,
                                           double omega_max) {
  require_finite_nonneg(amplitude, "power-law amplitude");
  if (!std::isfinite(exponent) || exponent < 0.0) {
    throw ValidationError("power-law exponent must be >= 0");
  }
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || !std::isfinite(omega_max)) {
    throw ValidationError("power-law cutoffs must satisfy 0 < omega_min < omega_max");
  }
  return SpectralDensity(PowerLawSpectrum{amplitude, exponent, omega_min, omega_max});
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega, std::vector<double> psd) {
  if (omega.size() != psd.size()) {
    throw ValidationError("tabulated spectrum needs as many PSD values as frequencies");
  }
  if (omega.size() < 2) throw ValidationError("tabulated spectrum needs at least two points");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i])) {
      throw ValidationError("tabulated frequencies must be positive and finite");
    }
    if (i > 0 && !(omega[i] > omega[i - 1])) {
      throw ValidationError("tabulated frequencies must be strictly ascending");
    }
    require_finite_nonneg(psd[i], "tabulated PSD value");
  }
  return SpectralDensity(TabulatedSpectrum{std::move(omega), std::move(psd)});
}

SpectralDensity SpectralDensity::load_tabulated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spectrum file '" + path.string() + "'");
  std::vector<double> omega, psd;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double w = 0.0, s = 0.0;
    if (!(fields >> w >> s)) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected two numeric columns (omega, S)");
    }
    omega.push_back(w);
    psd.push_back(s);
  }
  return tabulated(std::move(omega), std::move(psd));
}

std::string SpectralDensity::kind() const {
  return std::visit(overloaded{[](const WhiteSpectrum&) { return std::string("white"); },
                               [](const PowerLawSpectrum&) { return std::string("power_law"); },
                               [](const TabulatedSpectrum&) { return std::string("tabulated"); }},
                    model_);
}

double SpectralDensity::evaluate(double omega) const {
  const double w = std::abs(omega);
  return std::visit(
      overloaded{
          [](const WhiteSpectrum& s) { return s.psd; },
          [w](const PowerLawSpectrum& s) {
            if (w > s.omega_max) return 0.0;
            const double x = std::max(w, s.omega_min);
            return s.exponent == 0.0 ? s.amplitude : s.amplitude / std::pow(x, s.exponent);
          },
          [w](const TabulatedSpectrum& s) {
            if (w < s.omega.front() || w > s.omega.back()) return 0.0;
            auto it = std::upper_bound(s.omega.begin(), s.omega.end(), w);
            std::size_t i = static_cast<std::size_t>(it - s.omega.begin());
            if (i == s.omega.size()) return s.psd.back();
            i -= 1;
            const double w0 = s.omega[i], w1 = s.omega[i + 1];
            const double s0 = s.psd[i], s1 = s.psd[i + 1];
            if (s0 > 0.0 && s1 > 0.0) {
              const double f = std::log(w / w0) / std::log(w1 / w0);
              return std::exp(std::log(s0) + f * std::log(s1 / s0));
            }
            return s0 + (s1 - s0) * (w - w0) / (w1 - w0);
          }},
      model_);
}

double SpectralDensity::band_variance(double lo, double hi) const {
  if (!(lo >= 0.0) || hi < lo) throw ValidationError("band must satisfy 0 <= lo <= hi");
  const double integral = std::visit(
      overloaded{
          [&](const WhiteSpectrum& s) {
            if (!std::isfinite(hi)) {
              if (s.psd == 0.0) return 0.0;
              throw ValidationError("white noise is not integrable without a band limit");
            }
            return s.psd * (hi - lo);
          },
          [&](const PowerLawSpectrum& s) {
            const double plateau = evaluate(s.omega_min);
            double total = 0.0;
            const double p_hi = std::min(hi, s.omega_min);
            if (p_hi > lo) total += plateau * (p_hi - lo);
            const double a = std::max(lo, s.omega_min);
            const double b = std::min(hi, s.omega_max);
            if (b > a) total += s.amplitude * power_integral(a, b, -s.exponent);
            return total;
          },
          [&](const TabulatedSpectrum& s) {
            const double a = std::max(lo, s.omega.front());
            const double b = std::min(hi, s.omega.back());
            return b > a ? tabulated_integral(s, a, b, 0.0) : 0.0;
          }},
      model_);
  return integral / std::numbers::pi;
}

double SpectralDensity::variance(std::optional<double> band_limit) const {
  if (band_limit && !(*band_limit > 0.0)) throw ValidationError("band limit must be positive");
  const double top = band_limit.value_or(std::numeric_limits<double>::infinity());
  return std::visit(
      overloaded{[&](const WhiteSpectrum&) { return band_variance(0.0, top); },
                 [&](const PowerLawSpectrum& s) {
                   return band_variance(0.0, std::min(top, s.omega_max));
                 },
                 [&](const TabulatedSpectrum& s) {
                   return band_variance(0.0, std::min(top, s.omega.back()));
                 }},
      model_);
}

double SpectralDensity::tail_moment(double omega) const {
  if (!(omega > 0.0)) throw ValidationError("tail moment needs a positive frequency");
  return std::visit(
      overloaded{[&](const WhiteSpectrum& s) { return s.psd / omega; },
                 [&](const PowerLawSpectrum& s) {
                   double total = 0.0;
                   if (omega < s.omega_min) {
                     total += evaluate(s.omega_min) * (1.0 / omega - 1.0 / s.omega_min);
                   }
                   const double a = std::max(omega, s.omega_min);
                   if (s.omega_max > a) {
                     total += s.amplitude * power_integral(a, s.omega_max, -s.exponent - 2.0);
                   }
                   return total;
                 },
                 [&](const TabulatedSpectrum& s) {
                   const double a = std::max(omega, s.omega.front());
                   return s.omega.back() > a ? tabulated_integral(s, a, s.omega.back(), -2.0)
                                             : 0.0;
                 }},
      model_);
}

SpectralDensity SpectralDensity::scaled(double factor) const {
  require_finite_nonneg(factor, "spectrum scale factor");
  return std::visit(overloaded{[&](const WhiteSpectrum& s) {
                                 return SpectralDensity(WhiteSpectrum{s.psd * factor});
                               },
                               [&](const PowerLawSpectrum& s) {
                                 PowerLawSpectrum out = s;
                                 out.amplitude *= factor;
                                 return SpectralDensity(out);
                               },
                               [&](const TabulatedSpectrum& s) {
                                 TabulatedSpectrum out = s;
                                 for (auto& v : out.psd) v *= factor;
                                 return SpectralDensity(std::move(out));
                               }},
                    model_);
}

FrequencyGrid::FrequencyGrid(std::vector<double> values, GridSpacing spacing)
    : values_(std::move(values)), spacing_(spacing) {
  if (values_.size() < 2) throw ValidationError("frequency grid needs at least two points");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw ValidationError("frequency grid values must be positive and finite");
    }
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw ValidationError("frequency grid must be strictly ascending");
    }
  }
}

FrequencyGrid FrequencyGrid::linear(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw ValidationError("linear grid needs 0 < lo < hi and count >= 2");
  }
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  v.back() = hi;
  return FrequencyGrid(std::move(v), GridSpacing::Linear);
}

FrequencyGrid FrequencyGrid::logarithmic(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw ValidationError("logarithmic grid needs 0 < lo < hi and count >= 2");
  }
  std::vector<double> v(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return FrequencyGrid(std::move(v), GridSpacing::Logarithmic);
}

FrequencyGrid FrequencyGrid::log_linear(double lo, double hi, double points_per_decade,
                                        double max_step) {
  if (!(lo > 0.0) || !(hi > lo) || !(points_per_decade > 0.0) || !(max_step > 0.0)) {
    throw ValidationError("log-linear grid needs 0 < lo < hi and positive density/step");
  }
  const double ratio = std::pow(10.0, 1.0 / points_per_decade) - 1.0;
  std::vector<double> v{lo};
  while (v.back() < hi) {
    const double w = v.back();
    const double next = w + std::min(w * ratio, max_step);
    if (next >= hi || hi - next < 1e-3 * std::min(w * ratio, max_step)) {
      v.push_back(hi);
      break;
    }
    v.push_back(next);
  }
  return FrequencyGrid(std::move(v), GridSpacing::LogLinear);
}

FrequencyGrid FrequencyGrid::default_for(double tau) {
  if (!(tau > 0.0)) throw ValidationError("default grid needs a positive duration");
  return log_linear(1e-4 / tau, 1e4 / tau, 2000.0, 2.0 * std::numbers::pi / (16.0 * tau));
}

FrequencyGrid FrequencyGrid::from_values(std::vector<double> values) {
  return FrequencyGrid(std::move(values), GridSpacing::Custom);
}

XiEstimate xi_estimate(const PulseSequence& seq, std::span<const SpectralDensity> spectra,
                       std::optional<double> white_band_limit) {
  if (spectra.size() != seq.channels().size()) {
    throw ValidationError("xi estimate needs one spectrum per noise channel");
  }
  XiEstimate out;
  const double tau = seq.total_duration();
  for (std::size_t a = 0; a < spectra.size(); ++a) {
    double norm = 0.0;
    const Matrix* reference = nullptr;
    for (const auto& item : seq.items()) {
      const auto* seg = std::get_if<Segment>(&item);
      if (!seg) continue;
      const Matrix& b = seg->noise[a];
      if (reference && (b - *reference).cwiseAbs().maxCoeff() > 1e-12) out.heuristic = true;
      if (!reference) reference = &b;
      Eigen::SelfAdjointEigenSolver<Matrix> solver(b, Eigen::EigenvaluesOnly);
      norm = std::max(norm, solver.eigenvalues().cwiseAbs().maxCoeff());
    }
    const double sigma = std::sqrt(spectra[a].variance(white_band_limit));
    out.per_channel.push_back(norm * sigma * tau);
    out.total += out.per_channel.back();
  }
  return out;
}

}  // namespace ffcorr
