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
#include "ffcorr/process.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ffcorr/errors.hpp"

namespace ffcorr {

namespace {

struct Nodes {
  double zero_weight = 0.0;
  RealVector weights;
};

// Trapezoid weights on [0 or w_1, w_n].
Nodes trapezoid(const FrequencyGrid& grid, bool zero_node) {
  const auto& w = grid.values();
  const std::size_t n = w.size();
  Nodes out;
  out.weights.resize(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? w[i - 1] : (zero_node ? 0.0 : w[0]);
    const double right = i + 1 < n ? w[i + 1] : w[n - 1];
    out.weights(static_cast<Index>(i)) = 0.5 * (right - left);
  }
  if (zero_node) out.zero_weight = 0.5 * w[0];
  return out;
}

RealVector spectrum_on(const FrequencyGrid& grid, const SpectralDensity& s) {
  RealVector out(static_cast<Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) out(static_cast<Index>(i)) = s(grid[i]);
  return out;
}

void check_spectra(std::size_t channels, std::size_t spectra) {
  if (channels != spectra) {
    std::ostringstream msg;
    msg << "expected one spectrum per noise channel (" << channels << "), got " << spectra;
    throw ValidationError(msg.str());
  }
}

}  // namespace

RealMatrix DecayAmplitudes::total() const {
  if (per_channel.empty()) return {};
  RealMatrix out = per_channel.front();
  for (std::size_t i = 1; i < per_channel.size(); ++i) out += per_channel[i];
  return out;
}

DecayAmplitudes DecayAmplitudes::scaled(double factor) const {
  DecayAmplitudes out = *this;
  for (auto& m : out.per_channel) m *= factor;
  return out;
}

DecayAmplitudes decay_amplitudes_freq(const ControlMatrix& control,
                                      std::span<const SpectralDensity> spectra,
                                      QuadratureOptions options) {
  check_spectra(control.channel_count(), spectra.size());
  const FrequencyGrid& grid = control.grid();
  const Nodes nodes = trapezoid(grid, options.zero_frequency_node);
  const double omega_max = grid.back();
  const Index n = static_cast<Index>(grid.size());
  const Index d2 = control.basis_size();

  DecayAmplitudes out;
  out.channels = control.channels();
  double trace = 0.0, tail = 0.0, zero_interval = 0.0, last_decade = 0.0;
  for (std::size_t ch = 0; ch < control.channel_count(); ++ch) {
    const Matrix& b = control.values(ch);
    const RealVector s = spectrum_on(grid, spectra[ch]);
    const RealVector sw = s.cwiseProduct(nodes.weights);
    const RealMatrix re = b.real();
    const RealMatrix im = b.imag();
    RealMatrix gamma = re * sw.asDiagonal() * re.transpose();
    gamma.noalias() += im * sw.asDiagonal() * im.transpose();

    const Vector& b0 = control.zero_frequency(ch);
    const double s0 = spectra[ch](0.0);
    if (options.zero_frequency_node) {
      const RealVector r0 = b0.real();
      gamma.noalias() += nodes.zero_weight * s0 * r0 * r0.transpose();
    }
    RealMatrix tail_term = RealMatrix::Zero(d2, d2);
    if (options.asymptotic_tail) {
      const double moment = spectra[ch].tail_moment(omega_max);
      if (moment > 0.0) {
        std::vector<std::vector<Jump>> sources{control.jumps(ch)};
        for (const auto& c : cluster_jumps(sources, d2, 1.0 / omega_max)) {
          tail_term.noalias() += moment * c.by_source[0] * c.by_source[0].transpose();
        }
      }
    }
    gamma += tail_term;
    gamma /= std::numbers::pi;
    gamma = (0.5 * (gamma + gamma.transpose())).eval();

    // Diagnostics on the trace of the integrand.
    const RealVector f = b.cwiseAbs2().colwise().sum().transpose();
    const double f0 = b0.squaredNorm();
    trace += gamma.trace();
    tail += tail_term.trace() / std::numbers::pi;
    const double left0 = options.zero_frequency_node ? s0 * f0 : 0.0;
    zero_interval += 0.5 * grid[0] * (left0 + s(0) * f(0)) / std::numbers::pi;
    for (Index i = 0; i + 1 < n; ++i) {
      if (grid[static_cast<std::size_t>(i)] >= 0.1 * omega_max) {
        last_decade += 0.5 * (grid[static_cast<std::size_t>(i + 1)] - grid[static_cast<std::size_t>(i)]) *
                       (s(i) * f(i) + s(i + 1) * f(i + 1)) / std::numbers::pi;
      }
    }
    out.per_channel.push_back(std::move(gamma));
  }
  auto& diag = out.diagnostics;
  if (trace > 0.0) {
    diag.tail_share = tail / trace;
    diag.zero_interval_share = zero_interval / trace;
    diag.last_decade_share = last_decade / trace;
  }
  if (diag.tail_share > 1e-2) {
    std::ostringstream msg;
    msg << "asymptotic tail carries " << diag.tail_share
        << " of the decay; extend the grid to higher frequencies";
    diag.warnings.push_back(msg.str());
  }
  if (diag.last_decade_share > 5e-2) {
    std::ostringstream msg;
    msg << "last grid decade carries " << diag.last_decade_share
        << " of the decay; the grid may be truncated";
    diag.warnings.push_back(msg.str());
  }
  if (!options.zero_frequency_node && grid.front() * control.duration() > 1e-2) {
    diag.warnings.push_back("grid starts above 1e-2 / tau without a zero-frequency node");
  }
  return out;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(n - 1 - i);
    x[a] = -z;
    x[b] = z;
    w[a] = w[b] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

DecayAmplitudes decay_amplitudes_time(const PulseSequence& seq, const OperatorBasis& basis,
                                      std::span<const Autocorrelation> autocorrelations,
                                      int nodes_per_segment) {
  check_spectra(seq.channels().size(), autocorrelations.size());
  if (nodes_per_segment < 1) throw ValidationError("need at least one node per segment");
  if (basis.dim() != seq.dim()) {
    throw ValidationError("basis dimension does not match sequence dimension");
  }
  std::vector<double> x, w;
  gauss_legendre(nodes_per_segment, x, w);

  const PropagatorSet props(seq);
  std::vector<double> times, weights;
  std::vector<std::size_t> owners;
  for (std::size_t i = 0; i < seq.items().size(); ++i) {
    const auto* seg = std::get_if<Segment>(&seq.items()[i]);
    if (!seg) continue;
    const double t0 = props.start_time(i);
    for (std::size_t q = 0; q < x.size(); ++q) {
      times.push_back(t0 + 0.5 * seg->duration * (x[q] + 1.0));
      weights.push_back(0.5 * seg->duration * w[q]);
      owners.push_back(i);
    }
  }
  const Index m = static_cast<Index>(times.size());
  const std::size_t channels = seq.channels().size();
  std::vector<RealMatrix> b(channels, RealMatrix(basis.size(), m));
  for (Index j = 0; j < m; ++j) {
    const std::size_t i = owners[static_cast<std::size_t>(j)];
    const auto& seg = std::get<Segment>(seq.items()[i]);
    const Matrix u = propagator(*props.eigensystem(i), times[static_cast<std::size_t>(j)] -
                                                           props.start_time(i)) *
                     props.before(i);
    for (std::size_t ch = 0; ch < channels; ++ch) {
      Matrix r = u.adjoint() * seg.noise[ch] * u;
      r = (0.5 * (r + r.adjoint())).eval();
      b[ch].col(j) = basis.expand(r);
    }
  }
  const RealVector wv = Eigen::Map<const RealVector>(weights.data(), m);

  DecayAmplitudes out;
  out.channels = seq.channels();
  for (std::size_t ch = 0; ch < channels; ++ch) {
    RealMatrix gamma;
    if (const auto* white = std::get_if<WhiteAutocorrelation>(&autocorrelations[ch])) {
      gamma = white->psd * b[ch] * wv.asDiagonal() * b[ch].transpose();
    } else {
      const auto& c = std::get<std::function<double(double)>>(autocorrelations[ch]);
      RealMatrix kernel(m, m);
      for (Index p = 0; p < m; ++p) {
        for (Index q = 0; q < m; ++q) {
          kernel(p, q) = wv(p) * wv(q) * c(times[static_cast<std::size_t>(p)] -
                                            times[static_cast<std::size_t>(q)]);
        }
      }
      gamma = b[ch] * kernel * b[ch].transpose();
    }
    out.per_channel.push_back((0.5 * (gamma + gamma.transpose())).eval());
  }
  return out;
}

ProcessMap process_map(const DecayAmplitudes& gamma, const OperatorBasis& basis) {
  const Index n = basis.size();
  for (const auto& g : gamma.per_channel) {
    if (g.rows() != n || g.cols() != n) {
      throw ValidationError("decay amplitudes do not match the basis size");
    }
  }
  const RealMatrix total = gamma.per_channel.empty() ? RealMatrix::Zero(n, n) : gamma.total();
  const Index d = basis.dim();
  std::vector<Matrix> m(static_cast<std::size_t>(n), Matrix::Zero(d, d));
  Matrix a = Matrix::Zero(d, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double g = total(i, j);
      if (g == 0.0) continue;
      m[static_cast<std::size_t>(i)] += g * basis[j];
    }
    a += basis[i] * m[static_cast<std::size_t>(i)];
  }
  ProcessMap out{RealMatrix::Identity(n, n)};
  for (Index l = 0; l < n; ++l) {
    const Matrix& s = basis[l];
    Matrix image = -0.5 * (a * s + s * a);
    for (Index i = 0; i < n; ++i) {
      if (m[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff() == 0.0) continue;
      image += basis[i] * s * m[static_cast<std::size_t>(i)];
    }
    out.transfer.col(l) += basis.expand_complex(image).real();
  }
  return out;
}

ProcessMap compose_with_ideal(const ProcessMap& error, const Matrix& ideal,
                              const OperatorBasis& basis) {
  return ProcessMap{basis.transfer_matrix(ideal) * error.transfer};
}

Matrix choi_matrix(const ProcessMap& map, const OperatorBasis& basis) {
  const Index n = basis.size();
  const Index d = basis.dim();
  if (map.transfer.rows() != n || map.transfer.cols() != n) {
    throw ValidationError("transfer matrix does not match the basis size");
  }
  Matrix j = Matrix::Zero(d * d, d * d);
  for (Index l = 0; l < n; ++l) {
    Matrix acc = Matrix::Zero(d, d);
    for (Index k = 0; k < n; ++k) {
      if (map.transfer(k, l) != 0.0) acc += map.transfer(k, l) * basis[k];
    }
    j += kron(basis[l].conjugate(), acc);
  }
  return j;
}

RealVector choi_eigenvalues(const ProcessMap& map, const OperatorBasis& basis) {
  Matrix j = choi_matrix(map, basis);
  j = (0.5 * (j + j.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(j, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Choi eigensolver did not converge");
  return solver.eigenvalues();
}

FidelityResult fidelity(const DecayAmplitudes& gamma, Index dim) {
  FidelityResult out;
  const double norm = static_cast<double>(dim) + 1.0;
  for (const auto& g : gamma.per_channel) {
    out.per_channel_infidelity.push_back(g.trace() / norm);
    out.infidelity += out.per_channel_infidelity.back();
  }
  out.fidelity = 1.0 - out.infidelity;
  return out;
}

CorrelationInfidelities correlation_infidelities(const CorrelationFilterFunction& cff,
                                                 std::span<const SpectralDensity> spectra,
                                                 QuadratureOptions options) {
  check_spectra(cff.channels().size(), spectra.size());
  const FrequencyGrid& grid = cff.grid();
  const Nodes nodes = trapezoid(grid, options.zero_frequency_node);
  const Index g = static_cast<Index>(cff.gate_count());
  const double norm = (static_cast<double>(cff.dim()) + 1.0) * std::numbers::pi;

  CorrelationInfidelities out;
  out.labels = cff.labels();
  out.channels = cff.channels();
  out.total = RealMatrix::Zero(g, g);
  for (std::size_t ch = 0; ch < cff.channels().size(); ++ch) {
    const RealVector sw = spectrum_on(grid, spectra[ch]).cwiseProduct(nodes.weights);
    const RealVector flat = cff.values(ch).real() * sw;
    RealMatrix m = flat.reshaped(g, g);
    if (options.zero_frequency_node) {
      m += nodes.zero_weight * spectra[ch](0.0) * cff.zero_frequency(ch).real();
    }
    if (options.asymptotic_tail) {
      m += spectra[ch].tail_moment(grid.back()) * cff.tail_weights(ch);
    }
    m /= norm;
    m = (0.5 * (m + m.transpose())).eval();
    out.total += m;
    out.per_channel.push_back(std::move(m));
  }
  return out;
}

}  // namespace ffcorr
