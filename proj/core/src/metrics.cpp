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

#include "darisa/metrics.hpp"

#include <cmath>

namespace darisa
{
    double edof_from_singular_values(const RVector &s)
    {
        const RVector s2 = s.array().square();
        const double num = s2.sum();
        const double den = s2.squaredNorm();
        if (den <= 0.0)
            return 0.0;
        return num * num / den;
    }

    SpectrumReport spectrum(const CMatrix &matrix, double rank_threshold)
    {
        if (matrix.size() == 0)
            fail(ErrorKind::invalid_argument, "spectrum of an empty matrix");
        if (!(rank_threshold > 0.0 && rank_threshold < 1.0))
            fail(ErrorKind::invalid_argument, "rank_threshold must lie in (0, 1)");

        SpectrumReport r;
        Eigen::BDCSVD<CMatrix> svd(matrix);
        r.singular_values = svd.singularValues();
        const double top = r.singular_values.size() ? r.singular_values(0) : 0.0;
        if (!(top > 0.0))
        {
            r.degenerate = true;
            return r;
        }
        double smallest = top;
        for (Eigen::Index i = 0; i < r.singular_values.size(); ++i)
            if (r.singular_values(i) > rank_threshold * top)
            {
                ++r.numerical_rank;
                smallest = r.singular_values(i);
            }
        r.edof = edof_from_singular_values(r.singular_values);
        r.condition_number = (top * top) / (smallest * smallest);
        return r;
    }

    double edof(const CMatrix &matrix)
    {
        if (matrix.size() == 0)
            return 0.0;
        // Tr(G)^2 / ||G||_F^2 on the smaller Gram matrix
        const CMatrix G = matrix.rows() <= matrix.cols() ? CMatrix(matrix * matrix.adjoint())
                                                         : CMatrix(matrix.adjoint() * matrix);
        const double tr = G.trace().real();
        const double fro2 = G.squaredNorm();
        if (fro2 <= 0.0)
            return 0.0;
        return tr * tr / fro2;
    }

    double capacity_edof_approx(double psi, double snr)
    {
        if (psi <= 0.0)
            return 0.0;
        return psi * std::log2(1.0 + snr / psi);
    }

    double capacity_exact(const CMatrix &matrix, double snr)
    {
        if (matrix.size() == 0)
            return 0.0;
        Eigen::BDCSVD<CMatrix> svd(matrix);
        const double scale = snr / double(matrix.cols());
        double c = 0.0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        {
            const double s = svd.singularValues()(i);
            c += std::log2(1.0 + scale * s * s);
        }
        return c;
    }
}
