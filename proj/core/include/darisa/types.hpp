// Copyright 2026 The darisa-mimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace darisa
{
    using cplx = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kTwoPi = 2.0 * kPi;

    enum class Side
    {
        transmit,
        receive
    };

    const char *to_string(Side side);

    // Category carried by every library exception; the CLI maps it to its error record
    enum class ErrorKind
    {
        invalid_argument,
        degenerate_cluster,
        dimension_mismatch,
        solver_failure,
        config
    };

    const char *to_string(ErrorKind kind);

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &message)
            : std::runtime_error(message), kind_(kind) {}

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    [[noreturn]] inline void fail(ErrorKind kind, const std::string &message)
    {
        throw Error(kind, message);
    }
}
