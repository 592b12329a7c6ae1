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

#include <string>
#include <string_view>
#include <vector>

#include "ffcorr/types.hpp"

namespace ffcorr {

/// Largest qubit count accepted by the Pauli basis builder. The basis holds
/// 4^n dense d x d matrices, so memory grows as 16^n.
inline constexpr int kMaxQubits = 5;

/// A tensor product of single-qubit Paulis, e.g. "XIZ". The first symbol acts
/// on the most significant qubit (leftmost Kronecker factor).
class PauliString {
 public:
  explicit PauliString(std::string labels);

  const std::string& labels() const { return labels_; }
  int qubits() const { return static_cast<int>(labels_.size()); }
  bool is_identity() const;

  /// Unnormalized matrix (entries in {0, +-1, +-i}).
  Matrix matrix() const;

 private:
  std::string labels_;
};

/// Orthonormal Hermitian operator basis {sigma_k} with tr(sigma_k sigma_l) =
/// delta_kl. Built from Pauli strings scaled by 1/sqrt(d); note that most of
/// the filter-function literature uses unnormalized Paulis, so every
/// coefficient here is sqrt(d) times larger than in that convention.
///
/// Elements are ordered lexicographically in (I, X, Y, Z) with the first
/// qubit most significant, so element 0 is the scaled identity.
class OperatorBasis {
 public:
  static OperatorBasis pauli(int qubits);

  int qubits() const { return qubits_; }
  Index dim() const { return dim_; }
  Index size() const { return static_cast<Index>(elements_.size()); }

  const Matrix& operator[](Index k) const { return elements_[static_cast<std::size_t>(k)]; }
  const std::string& label(Index k) const { return labels_[static_cast<std::size_t>(k)]; }

  /// Index of a Pauli string label such as "IZ"; throws ValidationError if
  /// the label does not belong to this basis.
  Index index_of(std::string_view label) const;

  /// c_k = tr(op sigma_k). Throws ValidationError if op is not Hermitian to
  /// 1e-10 (message reports the anti-Hermitian norm).
  RealVector expand(const Matrix& op) const;

  /// c_k = tr(op sigma_k) for arbitrary complex op.
  Vector expand_complex(const Matrix& op) const;

  Matrix reconstruct(const RealVector& coefficients) const;
  Matrix reconstruct(const Vector& coefficients) const;

  /// Real matrix R with R_kl = tr(sigma_k U sigma_l U^dagger): the action of
  /// rho -> U rho U^dagger on coefficient vectors.
  RealMatrix transfer_matrix(const Matrix& unitary) const;

  /// The d^2 x d^2 matrix E such that expand_complex(M) equals E times
  /// the column-major vectorization of M.
  const Matrix& expansion_operator() const { return expansion_; }

 private:
  OperatorBasis() = default;

  int qubits_ = 0;
  Index dim_ = 0;
  std::vector<Matrix> elements_;
  std::vector<std::string> labels_;
  Matrix expansion_;
};

}  // namespace ffcorr
