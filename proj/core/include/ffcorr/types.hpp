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

#include <complex>

#include <Eigen/Dense>

namespace ffcorr {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Largest |A - A^dagger| entry, used by all Hermiticity checks.
double anti_hermitian_norm(const Matrix& a);

/// Largest entry of |U^dagger U - 1|.
double unitarity_error(const Matrix& u);

/// Kronecker product of two dense complex matrices.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace ffcorr
