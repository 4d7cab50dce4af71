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

#include <cstdint>
#include <optional>
#include <vector>

#include "darisa/array_geometry.hpp"
#include "darisa/types.hpp"

namespace darisa
{
    // Element phases for K reconfiguration slots on both sides. Phases are
    // radians; element (slot k, DARISA m, element j) responds with exp(j phase).
    class PhaseSchedule
    {
    public:
        PhaseSchedule() = default;
        PhaseSchedule(int K, int M, int N_t, int N, int N_r);

        static PhaseSchedule zeros(int K, const ArrayConfig &tx, const ArrayConfig &rx);

        // Uniform phases on (0, 2pi]. With randomize_transmit = false the
        // transmit side stays at zero.
        static PhaseSchedule random(int K, const ArrayConfig &tx, const ArrayConfig &rx, std::uint64_t seed,
                                    bool randomize_transmit = true);

        int K() const { return K_; }
        int M() const { return M_; }
        int N_t() const { return N_t_; }
        int N() const { return N_; }
        int N_r() const { return N_r_; }

        double &tx(int k, int m, int j) { return tx_[index(k, m, j, M_, N_t_)]; }
        double tx(int k, int m, int j) const { return tx_[index(k, m, j, M_, N_t_)]; }
        double &rx(int k, int n, int i) { return rx_[index(k, n, i, N_, N_r_)]; }
        double rx(int k, int n, int i) const { return rx_[index(k, n, i, N_, N_r_)]; }

        // Flat storage, slot-major then DARISA then element.
        const std::vector<double> &tx_phases() const { return tx_; }
        const std::vector<double> &rx_phases() const { return rx_; }
        std::vector<double> &tx_phases() { return tx_; }
        std::vector<double> &rx_phases() { return rx_; }

        // Receive vector of (slot k, DARISA n) as exp(j phase), length N_r.
        CVector rx_vector(int k, int n) const;

    private:
        static std::size_t index(int k, int d, int e, int D, int E)
        {
            return (std::size_t(k) * std::size_t(D) + std::size_t(d)) * std::size_t(E) + std::size_t(e);
        }

        int K_ = 0, M_ = 0, N_t_ = 0, N_ = 0, N_r_ = 0;
        std::vector<double> tx_;
        std::vector<double> rx_;
    };

    struct CompositeChannel
    {
        int K = 0;
        CMatrix H_C;     // (K N) x M, slot-major rows
        CMatrix Q_bar_t; // (K M N_t) x M, per-slot block-diagonal matrices stacked vertically
        CMatrix Q_bar_r; // (K N N_r) x (K N), block-diagonal over slots
        CMatrix H_w;     // one copy; the slot-replicated block diagonal is built on demand

        // blkdiag(H_w, ..., H_w), K copies. Dense; intended for small instances.
        CMatrix H_w_bar() const;
    };

    // Per-slot transmit beam matrix blkdiag(q_t^1(t_k), ..., q_t^M(t_k)).
    CMatrix transmit_block(const PhaseSchedule &schedule, int k);
    // Per-slot receive beam matrix blkdiag(q_r^1(t_k), ..., q_r^N(t_k)).
    CMatrix receive_block(const PhaseSchedule &schedule, int k);

    // H_C = Q_bar_r^H blkdiag(H_w) Q_bar_t. Slot k contributes rows
    // [kN, (k+1)N) equal to Q_r(t_k)^H H_w Q_t(t_k).
    CompositeChannel assemble_composite(const CMatrix &H_w, const PhaseSchedule &schedule);

    // y = H_C x + w with w ~ CN(0, P / (K M snr) I). P defaults to ||x||^2.
    CVector simulate_received(const CompositeChannel &channel, const CVector &symbol, double snr, std::uint64_t seed,
                              std::optional<double> transmit_power = std::nullopt);
}
