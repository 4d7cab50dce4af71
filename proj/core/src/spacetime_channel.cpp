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

#include "darisa/spacetime_channel.hpp"

#include <cmath>
#include <string>

#include "darisa/rng.hpp"

namespace darisa
{
    PhaseSchedule::PhaseSchedule(int K, int M, int N_t, int N, int N_r)
        : K_(K), M_(M), N_t_(N_t), N_(N), N_r_(N_r)
    {
        if (K < 1 || M < 1 || N_t < 1 || N < 1 || N_r < 1)
            fail(ErrorKind::invalid_argument, "phase schedule dimensions must be positive");
        tx_.assign(std::size_t(K) * std::size_t(M) * std::size_t(N_t), 0.0);
        rx_.assign(std::size_t(K) * std::size_t(N) * std::size_t(N_r), 0.0);
    }

    PhaseSchedule PhaseSchedule::zeros(int K, const ArrayConfig &tx, const ArrayConfig &rx)
    {
        return PhaseSchedule(K, tx.darisa_count, tx.elements_per_darisa(), rx.darisa_count, rx.elements_per_darisa());
    }

    PhaseSchedule PhaseSchedule::random(int K, const ArrayConfig &tx, const ArrayConfig &rx, std::uint64_t seed,
                                        bool randomize_transmit)
    {
        auto s = zeros(K, tx, rx);
        CounterRng rx_rng(seed, Stream::random_phases, 0);
        for (auto &p : s.rx_)
            p = rx_rng.phase();
        if (randomize_transmit)
        {
            CounterRng tx_rng(seed, Stream::random_phases, 1);
            for (auto &p : s.tx_)
                p = tx_rng.phase();
        }
        return s;
    }

    CVector PhaseSchedule::rx_vector(int k, int n) const
    {
        CVector q(N_r_);
        for (int i = 0; i < N_r_; ++i)
            q(i) = std::polar(1.0, rx(k, n, i));
        return q;
    }

    CMatrix CompositeChannel::H_w_bar() const
    {
        CMatrix out = CMatrix::Zero(K * H_w.rows(), K * H_w.cols());
        for (int k = 0; k < K; ++k)
            out.block(k * H_w.rows(), k * H_w.cols(), H_w.rows(), H_w.cols()) = H_w;
        return out;
    }

    CMatrix transmit_block(const PhaseSchedule &s, int k)
    {
        CMatrix Q = CMatrix::Zero(s.M() * s.N_t(), s.M());
        for (int m = 0; m < s.M(); ++m)
            for (int j = 0; j < s.N_t(); ++j)
                Q(m * s.N_t() + j, m) = std::polar(1.0, s.tx(k, m, j));
        return Q;
    }

    CMatrix receive_block(const PhaseSchedule &s, int k)
    {
        CMatrix Q = CMatrix::Zero(s.N() * s.N_r(), s.N());
        for (int n = 0; n < s.N(); ++n)
            for (int i = 0; i < s.N_r(); ++i)
                Q(n * s.N_r() + i, n) = std::polar(1.0, s.rx(k, n, i));
        return Q;
    }

    CompositeChannel assemble_composite(const CMatrix &H_w, const PhaseSchedule &s)
    {
        const Eigen::Index rows = Eigen::Index(s.N()) * s.N_r();
        const Eigen::Index cols = Eigen::Index(s.M()) * s.N_t();
        if (H_w.rows() != rows || H_w.cols() != cols)
            fail(ErrorKind::dimension_mismatch,
                 "H_w is " + std::to_string(H_w.rows()) + "x" + std::to_string(H_w.cols()) + " but the schedule needs " +
                     std::to_string(rows) + "x" + std::to_string(cols));

        const int K = s.K(), M = s.M(), N = s.N(), N_t = s.N_t(), N_r = s.N_r();
        CompositeChannel ch;
        ch.K = K;
        ch.H_w = H_w;
        ch.H_C.resize(K * N, M);
        ch.Q_bar_t = CMatrix::Zero(Eigen::Index(K) * cols, M);
        ch.Q_bar_r = CMatrix::Zero(Eigen::Index(K) * rows, K * N);

        for (int k = 0; k < K; ++k)
        {
            // H_w Q_t(t_k) without forming the block-diagonal matrix
            CMatrix G = CMatrix::Zero(rows, M);
            for (int m = 0; m < M; ++m)
                for (int j = 0; j < N_t; ++j)
                {
                    const cplx q = std::polar(1.0, s.tx(k, m, j));
                    G.col(m) += q * H_w.col(m * N_t + j);
                    ch.Q_bar_t(Eigen::Index(k) * cols + m * N_t + j, m) = q;
                }
            for (int n = 0; n < N; ++n)
            {
                const CVector q = s.rx_vector(k, n);
                ch.H_C.row(k * N + n) = q.adjoint() * G.middleRows(Eigen::Index(n) * N_r, N_r);
                ch.Q_bar_r.block(Eigen::Index(k) * rows + Eigen::Index(n) * N_r, k * N + n, N_r, 1) = q;
            }
        }
        return ch;
    }

    CVector simulate_received(const CompositeChannel &channel, const CVector &symbol, double snr, std::uint64_t seed,
                              std::optional<double> transmit_power)
    {
        if (!(snr > 0.0))
            fail(ErrorKind::invalid_argument, "snr must be positive");
        if (symbol.size() != channel.H_C.cols())
            fail(ErrorKind::dimension_mismatch, "symbol length must equal the number of transmit DARISAs");

        const double power = transmit_power.value_or(symbol.squaredNorm());
        const double variance = power / (double(channel.K) * double(channel.H_C.cols()) * snr);
        CVector y = channel.H_C * symbol;
        if (variance > 0.0)
        {
            const double sigma = std::sqrt(variance);
            CounterRng rng(seed, Stream::noise);
            for (Eigen::Index i = 0; i < y.size(); ++i)
                y(i) += sigma * rng.complex_normal();
        }
        return y;
    }
}
