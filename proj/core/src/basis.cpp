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
#include "ffcorr/basis.hpp"

#include <cmath>

#include "ffcorr/errors.hpp"

namespace ffcorr {

double anti_hermitian_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const Matrix& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

Matrix single_pauli(char label) {
  Matrix m = Matrix::Zero(2, 2);
  switch (label) {
    case 'I':
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case 'X':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 'Y':
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case 'Z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw ValidationError(std::string("invalid Pauli symbol '") + label + "'");
  }
  return m;
}

constexpr char kSymbols[4] = {'I', 'X', 'Y', 'Z'};

}  // namespace

PauliString::PauliString(std::string labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("Pauli string must act on at least one qubit");
  for (char c : labels_) single_pauli(c);
}

bool PauliString::is_identity() const {
  return labels_.find_first_not_of('I') == std::string::npos;
}

Matrix PauliString::matrix() const {
  Matrix m = single_pauli(labels_[0]);
  for (std::size_t q = 1; q < labels_.size(); ++q) m = kron(m, single_pauli(labels_[q]));
  return m;
}

OperatorBasis OperatorBasis::pauli(int qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw CapacityError("Pauli basis supports 1 to " + std::to_string(kMaxQubits) +
                        " qubits, got " + std::to_string(qubits));
  }
  OperatorBasis basis;
  basis.qubits_ = qubits;
  basis.dim_ = Index{1} << qubits;
  const Index count = basis.dim_ * basis.dim_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(basis.dim_));

  basis.elements_.reserve(static_cast<std::size_t>(count));
  basis.labels_.reserve(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) {
    std::string label(static_cast<std::size_t>(qubits), 'I');
    Index rest = k;
    for (int q = qubits - 1; q >= 0; --q) {
      label[static_cast<std::size_t>(q)] = kSymbols[rest % 4];
      rest /= 4;
    }
    basis.elements_.push_back(scale * PauliString(label).matrix());
    basis.labels_.push_back(std::move(label));
  }

  // tr(M s_k) = sum_ij M_ij (s_k)_ji, column-major vec index i + j d.
  const Index d = basis.dim_;
  basis.expansion_.resize(count, count);
  for (Index k = 0; k < count; ++k) {
    const Matrix& s = basis.elements_[static_cast<std::size_t>(k)];
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < d; ++i) basis.expansion_(k, i + j * d) = s(j, i);
    }
  }
  return basis;
}

Index OperatorBasis::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == label) return static_cast<Index>(k);
  }
  throw ValidationError("'" + std::string(label) + "' is not an element of the " +
                        std::to_string(qubits_) + "-qubit Pauli basis");
}

Vector OperatorBasis::expand_complex(const Matrix& op) const {
  if (op.rows() != dim_ || op.cols() != dim_) {
    throw ValidationError("operator is " + std::to_string(op.rows()) + "x" +
                          std::to_string(op.cols()) + ", basis dimension is " +
                          std::to_string(dim_));
  }
  return expansion_ * op.reshaped();
}

RealVector OperatorBasis::expand(const Matrix& op) const {
  const double anti = anti_hermitian_norm(op);
  if (anti > 1e-10) {
    throw ValidationError("operator is not Hermitian (anti-Hermitian norm " +
                          std::to_string(anti) + ")");
  }
  return expand_complex(op).real();
}

Matrix OperatorBasis::reconstruct(const RealVector& coefficients) const {
  return reconstruct(Vector(coefficients.cast<Complex>()));
}

Matrix OperatorBasis::reconstruct(const Vector& coefficients) const {
  if (coefficients.size() != size()) {
    throw ValidationError("coefficient vector has length " + std::to_string(coefficients.size()) +
                          ", basis has " + std::to_string(size()) + " elements");
  }
  Matrix out = Matrix::Zero(dim_, dim_);
  for (Index k = 0; k < size(); ++k) out += coefficients(k) * elements_[static_cast<std::size_t>(k)];
  return out;
}

RealMatrix OperatorBasis::transfer_matrix(const Matrix& unitary) const {
  if (unitary.rows() != dim_ || unitary.cols() != dim_) {
    throw ValidationError("unitary dimension does not match the basis");
  }
  const Index n = size();
  Matrix images(n, n);
  for (Index l = 0; l < n; ++l) {
    const Matrix conj = unitary * elements_[static_cast<std::size_t>(l)] * unitary.adjoint();
    images.col(l) = conj.reshaped();
  }
  return (expansion_ * images).real();
}

}  // namespace ffcorr
