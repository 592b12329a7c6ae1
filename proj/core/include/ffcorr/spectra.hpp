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
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ffcorr {

class PulseSequence;

/// Flat two-sided spectrum S(w) = psd.
struct WhiteSpectrum {
  double psd = 0.0;
};

/// S(w) = amplitude / |w|^exponent for omega_min <= |w| <= omega_max. Below
/// omega_min the value is clamped to S(omega_min) (a low-frequency plateau),
/// above omega_max it is zero.
struct PowerLawSpectrum {
  double amplitude = 0.0;
  double exponent = 1.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

/// Samples interpolated linearly in log-log space; zero outside
/// [omega.front(), omega.back()].
struct TabulatedSpectrum {
  std::vector<double> omega;
  std::vector<double> psd;
};

/// Two-sided power spectral density S(w) of a wide-sense stationary noise
/// variable, normalized so that <b(t1) b(t2)> = int dw/2pi S(w) e^{-iw(t1-t2)}.
/// All variants are even in w. Parameters are validated on construction.
class SpectralDensity {
 public:
  using Model = std::variant<WhiteSpectrum, PowerLawSpectrum, TabulatedSpectrum>;

  static SpectralDensity white(double psd);
  static SpectralDensity power_law(double amplitude, double exponent, double omega_min,
                                   double omega_max);
  static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> psd);

  /// Two-column text file (angular frequency, two-sided PSD); blank lines
  /// and anything after '#' are ignored.
  static SpectralDensity load_tabulated(const std::filesystem::path& path);

  const Model& model() const { return model_; }
  std::string kind() const;

  double operator()(double omega) const { return evaluate(omega); }
  double evaluate(double omega) const;

  /// sigma^2 = (1/2pi) int S(w) dw over the whole line. White noise is only
  /// integrable with an explicit band limit |w| <= band_limit; without one a
  /// ValidationError is raised.
  double variance(std::optional<double> band_limit = std::nullopt) const;

  /// (1/pi) int_lo^hi S(w) dw, i.e. the variance carried by lo <= |w| <= hi.
  double band_variance(double lo, double hi) const;

  /// int_omega^inf S(w) / w^2 dw, used for the asymptotic high-frequency
  /// tail of the decay amplitudes.
  double tail_moment(double omega) const;

  /// Same spectrum multiplied by factor >= 0.
  SpectralDensity scaled(double factor) const;

 private:
  explicit SpectralDensity(Model model) : model_(std::move(model)) {}

  Model model_;
};

enum class GridSpacing { Linear, Logarithmic, LogLinear, Custom };

/// Strictly ascending, strictly positive angular frequencies. Only w > 0 is
/// stored; negative frequencies follow by conjugation.
class FrequencyGrid {
 public:
  static FrequencyGrid linear(double lo, double hi, std::size_t count);
  static FrequencyGrid logarithmic(double lo, double hi, std::size_t count);

  /// Geometric spacing with \p points_per_decade until the step reaches
  /// \p max_step, uniform steps of max_step from there up to hi.
  static FrequencyGrid log_linear(double lo, double hi, double points_per_decade,
                                  double max_step);

  /// Default quadrature grid for a sequence of total duration tau:
  /// w tau in [1e-4, 1e4], 2000 points per decade, steps capped at
  /// 2 pi / (16 tau) so that oscillations of period 2 pi / tau in w are
  /// resolved.
  static FrequencyGrid default_for(double tau);

  static FrequencyGrid from_values(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  GridSpacing spacing() const { return spacing_; }

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.values_ == b.values_;
  }

 private:
  FrequencyGrid(std::vector<double> values, GridSpacing spacing);

  std::vector<double> values_;
  GridSpacing spacing_;
};

/// Perturbative noise strength xi_alpha = max_s ||B_alpha^(s)|| sigma_alpha tau
/// (spectral norm, maximum over segments) and its sum over channels.
struct XiEstimate {
  std::vector<double> per_channel;
  double total = 0.0;
  /// True when some B_alpha varies between segments; the estimate is then a
  /// conservative generalization rather than the constant-operator formula.
  bool heuristic = false;
};

/// \p spectra are aligned with seq.channels(). \p white_band_limit is
/// forwarded to variance() for white spectra.
XiEstimate xi_estimate(const PulseSequence& seq, std::span<const SpectralDensity> spectra,
                       std::optional<double> white_band_limit = std::nullopt);

}  // namespace ffcorr
