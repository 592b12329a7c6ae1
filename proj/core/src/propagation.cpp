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
#include "ffcorr/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ffcorr/errors.hpp"

namespace ffcorr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Eigensystem diagonalize(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  Eigensystem eig{solver.eigenvalues(), solver.eigenvectors()};
  const Matrix rebuilt =
      eig.vectors * eig.energies.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  const double scale = std::max(1.0, hermitian.cwiseAbs().maxCoeff());
  const double residual = (rebuilt - hermitian).cwiseAbs().maxCoeff() / scale;
  if (!(residual <= 1e-10)) {
    std::ostringstream msg;
    msg << "eigendecomposition residual " << residual << " exceeds 1e-10";
    throw NumericalError(msg.str());
  }
  return eig;
}

Matrix propagator(const Eigensystem& eig, double t) {
  const Index d = eig.energies.size();
  Vector phases(d);
  for (Index i = 0; i < d; ++i) phases(i) = std::polar(1.0, -eig.energies(i) * t);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix expm_hermitian(const Matrix& h, double t) {
  if (h.rows() == 2 && h.cols() == 2) {
    // H = h0 1 + hx X + hy Y + hz Z
    const double h0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double hz = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const Complex off = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    const double r = std::sqrt(hz * hz + std::norm(off));
    const double c = std::cos(r * t);
    const double s = r * t == 0.0 ? t : std::sin(r * t) / r;
    const Complex global = std::polar(1.0, -h0 * t);
    const Complex mi(0.0, -1.0);
    Matrix u(2, 2);
    u(0, 0) = global * (c + mi * s * hz);
    u(1, 1) = global * (c - mi * s * hz);
    u(0, 1) = global * mi * s * off;
    u(1, 0) = global * mi * s * std::conj(off);
    return u;
  }
  return propagator(diagonalize(h), t);
}

Matrix segment_propagator(const Segment& segment) {
  return expm_hermitian(segment.hamiltonian, segment.duration);
}

PropagatorSet::PropagatorSet(const PulseSequence& seq) {
  const auto& items = seq.items();
  const Index d = seq.dim();
  start_times_ = seq.item_start_times();
  cumulative_.push_back(Matrix::Identity(d, d));
  for (const auto& item : items) {
    std::visit(overloaded{[&](const Segment& s) {
                            auto eig = diagonalize(s.hamiltonian);
                            propagators_.push_back(ffcorr::propagator(eig, s.duration));
                            eigensystems_.emplace_back(std::move(eig));
                            durations_.push_back(s.duration);
                          },
                          [&](const InstantaneousGate& g) {
                            propagators_.push_back(g.unitary);
                            eigensystems_.emplace_back(std::nullopt);
                            durations_.push_back(0.0);
                          }},
               item);
    cumulative_.push_back(propagators_.back() * cumulative_.back());
  }
  for (const auto& gate : seq.gates()) gate_frames_.push_back(cumulative_[gate.begin]);
  boundary_times_ = seq.boundary_times();
}

std::size_t PropagatorSet::segment_at(double t) const {
  const double tau = start_times_.back() + durations_.back();
  const double tol = 1e-12 * std::max(1.0, tau);
  if (!(t >= -tol && t <= tau + tol)) {
    std::ostringstream msg;
    msg << "time " << t << " outside [0, " << tau << "]";
    throw RangeError(msg.str());
  }
  std::size_t last = 0;
  for (std::size_t i = 0; i < propagators_.size(); ++i) {
    if (!eigensystems_[i]) continue;
    last = i;
    if (t <= start_times_[i] + durations_[i] + tol) return i;
  }
  return last;
}

Matrix PropagatorSet::at(double t) const {
  const std::size_t i = segment_at(t);
  const double local = std::clamp(t - start_times_[i], 0.0, durations_[i]);
  return ffcorr::propagator(*eigensystems_[i], local) * cumulative_[i];
}

}  // namespace ffcorr
