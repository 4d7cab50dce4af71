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

#include "darisa/edof_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "darisa/rng.hpp"

namespace darisa
{
    namespace
    {
        double rdot(const CMatrix &a, const CMatrix &b)
        {
            return (a.conjugate().cwiseProduct(b)).sum().real();
        }

        double wrap_phase(double phase)
        {
            double p = std::fmod(phase, kTwoPi);
            if (p <= 0.0)
                p += kTwoPi;
            return p;
        }

        void normalize_rows(CMatrix &V)
        {
            for (Eigen::Index i = 0; i < V.rows(); ++i)
            {
                const double n = V.row(i).norm();
                if (n > 0.0)
                    V.row(i) /= n;
                else
                {
                    V.row(i).setZero();
                    V(i, 0) = 1.0;
                }
            }
        }

        struct Evaluation
        {
            std::vector<CMatrix> P; // V_b^H B_b
            CMatrix S;
            double trace = 0.0;
            double fro = 0.0;
            double f = 0.0;
        };

        Evaluation evaluate(const SdrProblem &prob, const std::vector<CMatrix> &V, double zeta)
        {
            Evaluation ev;
            ev.P.resize(V.size());
            ev.S = CMatrix::Zero(prob.M, prob.M);
            for (int b = 0; b < prob.block_count(); ++b)
            {
                ev.P[b].noalias() = V[b].adjoint() * prob.block(b);
                ev.S.noalias() += ev.P[b].adjoint() * ev.P[b];
            }
            ev.trace = ev.S.trace().real();
            ev.fro = ev.S.norm();
            ev.f = ev.trace - zeta * ev.fro;
            return ev;
        }

        CMatrix gamma(const Evaluation &ev, double zeta, int M)
        {
            CMatrix G = CMatrix::Identity(M, M);
            if (ev.fro > 0.0)
                G -= (zeta / ev.fro) * ev.S;
            return G;
        }

        // Riemannian gradient on the product of oblique manifolds.
        std::vector<CMatrix> gradient(const SdrProblem &prob, const std::vector<CMatrix> &V, const Evaluation &ev,
                                      const CMatrix &Gamma, std::vector<CMatrix> *euclidean = nullptr)
        {
            std::vector<CMatrix> R(V.size());
            if (euclidean)
                euclidean->resize(V.size());
            for (int b = 0; b < prob.block_count(); ++b)
            {
                CMatrix G = 2.0 * (prob.block(b) * (Gamma * ev.P[b].adjoint()));
                if (euclidean)
                    (*euclidean)[b] = G;
                for (Eigen::Index i = 0; i < G.rows(); ++i)
                {
                    const double radial = (V[b].row(i).conjugate().cwiseProduct(G.row(i))).sum().real();
                    G.row(i) -= radial * V[b].row(i);
                }
                R[b] = std::move(G);
            }
            return R;
        }

        CMatrix project_tangent(const CMatrix &V, CMatrix X)
        {
            for (Eigen::Index i = 0; i < X.rows(); ++i)
            {
                const double radial = (V.row(i).conjugate().cwiseProduct(X.row(i))).sum().real();
                X.row(i) -= radial * V.row(i);
            }
            return X;
        }

        double squared_norm(const std::vector<CMatrix> &X)
        {
            double s = 0.0;
            for (const auto &x : X)
                s += x.squaredNorm();
            return s;
        }

        struct Certificate
        {
            double gap = 0.0;
            std::vector<double> lambda_min;
            std::vector<CVector> direction;
        };

        // Dual bound from y_i = Re(W_b E_b)_ii shifted until Diag(y) - W_b is PSD.
        Certificate certify(const SdrProblem &prob, const std::vector<CMatrix> &V, const Evaluation &ev,
                            const CMatrix &Gamma, bool want_directions)
        {
            Certificate c;
            c.lambda_min.resize(V.size());
            if (want_directions)
                c.direction.resize(V.size());
            for (int b = 0; b < prob.block_count(); ++b)
            {
                const auto Bb = prob.block(b);
                const CMatrix WV = Bb * (Gamma * ev.P[b].adjoint());
                CMatrix A = -(Bb * Gamma * Bb.adjoint());
                for (Eigen::Index i = 0; i < A.rows(); ++i)
                {
                    const double y = (V[b].row(i).conjugate().cwiseProduct(WV.row(i))).sum().real();
                    A(i, i) += y;
                }
                A = 0.5 * (A + A.adjoint()).eval();
                Eigen::SelfAdjointEigenSolver<CMatrix> es(
                    A, want_directions ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
                const double lmin = es.eigenvalues()(0);
                c.lambda_min[b] = lmin;
                if (want_directions)
                    c.direction[b] = es.eigenvectors().col(0);
                c.gap += double(prob.N_r) * std::max(0.0, -lmin);
            }
            return c;
        }

        std::vector<CMatrix> initial_factors(const SdrProblem &prob, int requested)
        {
            const int n = prob.N_r;
            int r = n <= 32 ? n : std::min(n, int(std::ceil(std::sqrt(2.0 * n))) + 1);
            if (requested > 0)
                r = std::min(n, requested);
            CMatrix V0;
            if (r == n)
                V0 = CMatrix::Identity(n, n);
            else
            {
                constexpr double golden = 0.6180339887498949;
                V0.resize(n, r);
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < r; ++c)
                    {
                        const double frac = std::fmod(double(i) * double(c + 1) * golden, 1.0);
                        V0(i, c) = std::polar(1.0 / std::sqrt(double(r)), kTwoPi * frac);
                    }
            }
            return std::vector<CMatrix>(prob.block_count(), V0);
        }

        std::vector<CMatrix> axpy_retract(const std::vector<CMatrix> &V, double t, const std::vector<CMatrix> &R)
        {
            std::vector<CMatrix> out(V.size());
            for (std::size_t b = 0; b < V.size(); ++b)
            {
                out[b] = V[b] + t * R[b];
                normalize_rows(out[b]);
            }
            return out;
        }

        void escalate(std::vector<CMatrix> &V, const Certificate &cert)
        {
            constexpr double alpha = 0.3;
            for (std::size_t b = 0; b < V.size(); ++b)
            {
                CMatrix grown(V[b].rows(), V[b].cols() + 1);
                grown.leftCols(V[b].cols()) = V[b];
                if (cert.lambda_min[b] < 0.0)
                    grown.col(V[b].cols()) = alpha * std::sqrt(double(V[b].rows())) * cert.direction[b];
                else
                    grown.col(V[b].cols()).setZero();
                normalize_rows(grown);
                if (grown.cols() > grown.rows())
                {
                    // same Gram matrix with one column fewer
                    Eigen::HouseholderQR<CMatrix> qr(grown.adjoint());
                    CMatrix r = qr.matrixQR().topRows(grown.rows()).triangularView<Eigen::Upper>();
                    grown = r.adjoint();
                }
                V[b] = std::move(grown);
            }
        }

        std::vector<double> phases_of(const CVector &x)
        {
            std::vector<double> p(std::size_t(x.size()));
            for (Eigen::Index i = 0; i < x.size(); ++i)
                p[std::size_t(i)] = wrap_phase(std::arg(x(i)));
            return p;
        }
    }

    CMatrix SdrProblem::dense_c() const
    {
        CMatrix C = B * B.adjoint();
        return 0.5 * (C + C.adjoint());
    }

    SdrProblem build_sdr_problem(const CMatrix &H_w, const PhaseSchedule &schedule, std::optional<int> dof_limit)
    {
        const Eigen::Index rows = Eigen::Index(schedule.N()) * schedule.N_r();
        const Eigen::Index cols = Eigen::Index(schedule.M()) * schedule.N_t();
        if (H_w.rows() != rows || H_w.cols() != cols)
            fail(ErrorKind::dimension_mismatch, "H_w does not match the phase schedule dimensions");

        SdrProblem p;
        p.K = schedule.K();
        p.N = schedule.N();
        p.N_r = schedule.N_r();
        p.M = schedule.M();
        p.schedule = schedule;
        p.dof_limit = dof_limit;
        p.B.resize(Eigen::Index(p.K) * rows, p.M);
        for (int k = 0; k < p.K; ++k)
            p.B.middleRows(Eigen::Index(k) * rows, rows) = H_w * transmit_block(schedule, k);
        return p;
    }

    CMatrix RelaxedSolution::dense() const
    {
        Eigen::Index n = 0;
        for (const auto &f : factors)
            n += f.rows();
        CMatrix E = CMatrix::Zero(n, n);
        Eigen::Index at = 0;
        for (std::size_t b = 0; b < factors.size(); ++b)
        {
            const Eigen::Index s = factors[b].rows();
            E.block(at, at, s, s) = block(int(b));
            at += s;
        }
        return E;
    }

    RelaxedSolution solve_subproblem(const SdrProblem &prob, double zeta, const SolverOptions &options,
                                     const RelaxedSolution *warm_start)
    {
        if (!(zeta >= 0.0))
            fail(ErrorKind::invalid_argument, "zeta must be non-negative");
        if (options.max_iters < 1 || !(options.tol > 0.0) || !(options.gap_tol > 0.0))
            fail(ErrorKind::invalid_argument, "solver needs max_iters >= 1 and positive tolerances");

        const double scale = std::max(prob.trace_c(), std::numeric_limits<double>::min());
        const double tol_abs = options.tol * scale;
        const double grad_floor = 1e-12 * scale;
        constexpr int memory = 8;

        std::vector<CMatrix> V;
        if (warm_start && int(warm_start->factors.size()) == prob.block_count() &&
            warm_start->factors.front().rows() == prob.N_r)
            V = warm_start->factors;
        else
            V = initial_factors(prob, options.initial_rank);

        double max_block = 0.0;
        for (int b = 0; b < prob.block_count(); ++b)
            max_block = std::max(max_block, prob.block(b).squaredNorm());
        const double t0 = 1.0 / (2.0 * (1.0 + zeta) * std::max(max_block, std::numeric_limits<double>::min()));

        // L-BFGS pairs for the ascent problem, kept in the current tangent space
        struct Pair
        {
            std::vector<CMatrix> s, y;
            double rho;
        };
        std::deque<Pair> history;

        Evaluation ev = evaluate(prob, V, zeta);
        CMatrix Gam = gamma(ev, zeta, prob.M);
        std::vector<CMatrix> R = gradient(prob, V, ev, Gam);
        double gn = std::sqrt(squared_norm(R));
        double next_check = 1e-2 * gn;
        Certificate cert;
        bool certified = false;
        bool converged = false;
        int it = 0;
        int full_rank_escapes = 0;

        auto restart = [&] {
            ev = evaluate(prob, V, zeta);
            Gam = gamma(ev, zeta, prob.M);
            R = gradient(prob, V, ev, Gam);
            gn = std::sqrt(squared_norm(R));
            next_check = 1e-2 * gn;
            history.clear();
            certified = false;
        };

        for (;;)
        {
            if (options.stop_on_sign && ev.f > 0.0)
                break;
            const bool stalled = gn <= grad_floor;
            if (gn <= next_check || stalled || it >= options.max_iters)
            {
                cert = certify(prob, V, ev, Gam, false);
                certified = true;
                if (cert.gap <= tol_abs || (gn <= tol_abs && cert.gap <= options.gap_tol * scale))
                {
                    converged = true;
                    break;
                }
                if (options.stop_on_sign && ev.f + cert.gap < 0.0)
                    break;
                if (it >= options.max_iters)
                    break;
                if (stalled)
                {
                    if (V.front().cols() >= prob.N_r && (options.stop_on_sign || ++full_rank_escapes > 8))
                        break;
                    escalate(V, certify(prob, V, ev, Gam, true));
                    restart();
                    continue;
                }
                next_check = 0.1 * gn;
            }
            ++it;

            // two-loop recursion on the ascent direction
            std::vector<CMatrix> d = R;
            std::vector<double> alpha(history.size());
            for (std::size_t h = history.size(); h-- > 0;)
            {
                double a = 0.0;
                for (std::size_t b = 0; b < d.size(); ++b)
                    a += rdot(history[h].s[b], d[b]);
                alpha[h] = history[h].rho * a;
                for (std::size_t b = 0; b < d.size(); ++b)
                    d[b] -= alpha[h] * history[h].y[b];
            }
            double gamma0 = t0;
            if (!history.empty())
            {
                const Pair &last = history.back();
                gamma0 = 1.0 / (last.rho * squared_norm(last.y));
            }
            for (auto &x : d)
                x *= gamma0;
            for (std::size_t h = 0; h < history.size(); ++h)
            {
                double bb = 0.0;
                for (std::size_t b = 0; b < d.size(); ++b)
                    bb += rdot(history[h].y[b], d[b]);
                bb *= history[h].rho;
                for (std::size_t b = 0; b < d.size(); ++b)
                    d[b] += (alpha[h] - bb) * history[h].s[b];
            }
            double slope = 0.0;
            for (std::size_t b = 0; b < d.size(); ++b)
                slope += rdot(R[b], d[b]);
            if (!(slope > 0.0))
            {
                history.clear();
                d = R;
                for (auto &x : d)
                    x *= t0;
                slope = t0 * gn * gn;
            }

            double t = 1.0;
            bool accepted = false;
            std::vector<CMatrix> Vn;
            Evaluation evn;
            for (int ls = 0; ls < 60; ++ls)
            {
                Vn = axpy_retract(V, t, d);
                evn = evaluate(prob, Vn, zeta);
                if (evn.f >= ev.f + 1e-4 * t * slope)
                {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted)
            {
                if (!history.empty())
                {
                    history.clear();
                    continue;
                }
                // no representable ascent left at this rank
                gn = 0.0;
                continue;
            }

            const CMatrix Gn = gamma(evn, zeta, prob.M);
            std::vector<CMatrix> Rn = gradient(prob, Vn, evn, Gn);

            Pair p;
            p.s.resize(V.size());
            p.y.resize(V.size());
            double sy = 0.0;
            for (std::size_t b = 0; b < V.size(); ++b)
            {
                p.s[b] = project_tangent(Vn[b], t * d[b]);
                // ascent: y is the decrease of the gradient of -f
                p.y[b] = project_tangent(Vn[b], R[b]) - Rn[b];
                sy += rdot(p.s[b], p.y[b]);
            }
            for (auto &h : history)
                for (std::size_t b = 0; b < V.size(); ++b)
                {
                    h.s[b] = project_tangent(Vn[b], h.s[b]);
                    h.y[b] = project_tangent(Vn[b], h.y[b]);
                }
            if (sy > 1e-12 * std::sqrt(squared_norm(p.s) * squared_norm(p.y)))
            {
                p.rho = 1.0 / sy;
                history.push_back(std::move(p));
                if (int(history.size()) > memory)
                    history.pop_front();
            }

            V = std::move(Vn);
            ev = std::move(evn);
            certified = false;
            Gam = Gn;
            R = std::move(Rn);
            gn = std::sqrt(squared_norm(R));
        }

        RelaxedSolution sol;
        sol.factors = std::move(V);
        sol.objective = ev.f;
        const double gap = certified ? cert.gap : std::numeric_limits<double>::infinity();
        sol.upper_bound = ev.f + gap;
        sol.duality_gap = gap;
        sol.stationarity_residual = gn / scale;
        sol.ratio = ev.fro > 0.0 ? ev.trace / ev.fro : 0.0;
        sol.iterations = it;
        sol.rank = int(sol.factors.front().cols());
        sol.converged = converged;
        for (const auto &f : sol.factors)
            for (Eigen::Index i = 0; i < f.rows(); ++i)
                sol.feasibility_residual = std::max(sol.feasibility_residual, std::abs(f.row(i).squaredNorm() - 1.0));
        return sol;
    }

    double evaluate_F(const SdrProblem &prob, double zeta, const SolverOptions &options)
    {
        return solve_subproblem(prob, zeta, options).objective;
    }

    double relaxed_ratio(const SdrProblem &prob, const std::vector<CMatrix> &factors)
    {
        const Evaluation ev = evaluate(prob, factors, 0.0);
        return ev.fro > 0.0 ? ev.trace / ev.fro : 0.0;
    }

    double phase_edof(const SdrProblem &prob, const std::vector<double> &rx_phases)
    {
        if (rx_phases.size() != std::size_t(prob.block_count()) * std::size_t(prob.N_r))
            fail(ErrorKind::dimension_mismatch, "receive phase count does not match the problem");
        CMatrix S = CMatrix::Zero(prob.M, prob.M);
        CVector q(prob.N_r);
        for (int b = 0; b < prob.block_count(); ++b)
        {
            for (int i = 0; i < prob.N_r; ++i)
                q(i) = std::polar(1.0, rx_phases[std::size_t(b) * prob.N_r + i]);
            const CVector h = prob.block(b).adjoint() * q;
            S.noalias() += h * h.adjoint();
        }
        const double tr = S.trace().real();
        const double fro2 = S.squaredNorm();
        return fro2 > 0.0 ? tr * tr / fro2 : 0.0;
    }

    double zeta_upper_bound(const SdrProblem &prob)
    {
        int rank = 0;
        if (prob.B.size() > 0)
        {
            Eigen::BDCSVD<CMatrix> svd(prob.B);
            const RVector &s = svd.singularValues();
            for (Eigen::Index i = 0; i < s.size(); ++i)
                if (s(i) > 1e-6 * s(0))
                    ++rank;
        }
        const int bound = std::max(prob.dof_limit.value_or(0), std::min(prob.M, rank));
        return std::sqrt(double(std::max(bound, 1)));
    }

    DinkelbachRun dinkelbach_bisect(const SdrProblem &prob, const BisectionOptions &options)
    {
        if (!(options.epsilon > 0.0))
            fail(ErrorKind::invalid_argument, "epsilon must be positive");

        const double tol_abs = options.solver.tol * prob.trace_c();
        DinkelbachRun run;
        run.zeta_low = 1.0;
        run.zeta_high = zeta_upper_bound(prob);
        run.zeta_upper_initial = run.zeta_high;

        SolverOptions sign_only = options.solver;
        sign_only.stop_on_sign = true;

        RelaxedSolution low = solve_subproblem(prob, run.zeta_low, sign_only);
        ++run.subproblem_solves;
        run.F_low = low.objective;
        if (low.upper_bound < -tol_abs)
        {
            std::ostringstream msg;
            msg << "F(1) = " << low.upper_bound << " is negative; subproblem did not converge";
            fail(ErrorKind::solver_failure, msg.str());
        }
        RelaxedSolution last = low;
        if (run.zeta_high > run.zeta_low)
        {
            RelaxedSolution high = solve_subproblem(prob, run.zeta_high, sign_only, &low);
            ++run.subproblem_solves;
            run.F_high = high.objective;
            if (high.objective > tol_abs)
            {
                std::ostringstream msg;
                msg << "F(" << run.zeta_high << ") = " << high.objective
                    << " is positive; the upper bracket does not bound the ratio";
                fail(ErrorKind::solver_failure, msg.str());
            }
        }

        while (run.zeta_high - run.zeta_low > options.epsilon)
        {
            const double mid = 0.5 * (run.zeta_low + run.zeta_high);
            RelaxedSolution sol = solve_subproblem(prob, mid, sign_only, &last);
            ++run.subproblem_solves;
            run.iterations.push_back({mid, sol.objective, sol.upper_bound, sol.iterations, sol.converged});
            if (sol.objective > 0.0)
                run.zeta_low = mid;
            else
                run.zeta_high = mid;
            last = std::move(sol);
        }
        run.zeta_opt = 0.5 * (run.zeta_low + run.zeta_high);
        run.E_opt = solve_subproblem(prob, run.zeta_opt, options.solver, &last);
        ++run.subproblem_solves;
        return run;
    }

    double quantize_phase(double phase, int bits)
    {
        if (bits < 1 || bits > 30)
            fail(ErrorKind::invalid_argument, "bits must lie in [1, 30]");
        const long levels = 1L << bits;
        const double step = kTwoPi / double(levels);
        double p = std::fmod(phase, kTwoPi);
        if (p < 0.0)
            p += kTwoPi;
        const double idx = p / step;
        long lower = long(std::floor(idx));
        const double frac = idx - double(lower);
        long pick;
        if (frac < 0.5)
            pick = lower;
        else if (frac > 0.5)
            pick = lower + 1;
        else
            pick = std::min(lower % levels, (lower + 1) % levels);
        return double(pick % levels) * step;
    }

    std::vector<double> quantize_phases(const std::vector<double> &phases, int bits)
    {
        std::vector<double> out(phases.size());
        for (std::size_t i = 0; i < phases.size(); ++i)
            out[i] = quantize_phase(phases[i], bits);
        return out;
    }

    RandomizationResult gaussian_randomize(const RelaxedSolution &E_opt, const SdrProblem &prob, int num_draws,
                                           std::uint64_t seed, std::optional<int> bits)
    {
        if (num_draws < 1)
            fail(ErrorKind::invalid_argument, "num_draws must be at least 1");
        if (int(E_opt.factors.size()) != prob.block_count())
            fail(ErrorKind::dimension_mismatch, "relaxed solution does not match the problem");

        const std::size_t n = std::size_t(prob.N_r);
        std::vector<double> candidate(std::size_t(prob.block_count()) * n);
        auto place = [&](int b, std::vector<double> p) {
            if (bits)
                p = quantize_phases(p, *bits);
            std::copy(p.begin(), p.end(), candidate.begin() + std::ptrdiff_t(std::size_t(b) * n));
        };

        RandomizationResult best;
        best.achieved_edof = -1.0;
        std::vector<double> best_phases;

        for (int b = 0; b < prob.block_count(); ++b)
        {
            Eigen::JacobiSVD<CMatrix> svd(E_opt.factors[b], Eigen::ComputeThinU);
            place(b, phases_of(svd.matrixU().col(0)));
        }
        best.achieved_edof = phase_edof(prob, candidate);
        best.best_draw = -1;
        best_phases = candidate;

        for (int d = 0; d < num_draws; ++d)
        {
            CounterRng rng(seed, Stream::randomization, std::uint32_t(d));
            for (int b = 0; b < prob.block_count(); ++b)
            {
                const CMatrix &V = E_opt.factors[b];
                CVector z(V.cols());
                for (Eigen::Index c = 0; c < z.size(); ++c)
                    z(c) = rng.complex_normal();
                place(b, phases_of(V * z));
            }
            const double e = phase_edof(prob, candidate);
            if (e > best.achieved_edof)
            {
                best.achieved_edof = e;
                best.best_draw = d;
                best_phases = candidate;
            }
        }

        best.schedule = prob.schedule;
        best.schedule.rx_phases() = std::move(best_phases);
        return best;
    }

    OptimizationReport optimize_receive_phases(const SdrProblem &prob, const OptimizerOptions &options,
                                               std::uint64_t seed)
    {
        OptimizationReport rep;
        rep.run = dinkelbach_bisect(prob, options.bisection);
        rep.relaxed_edof = rep.run.zeta_opt * rep.run.zeta_opt;

        RandomizationResult cont = gaussian_randomize(rep.run.E_opt, prob, options.num_draws, seed);
        rep.randomized_edof = cont.achieved_edof;
        rep.continuous_schedule = cont.schedule;
        rep.run.recovered_phases = cont.schedule;
        rep.run.achieved_edof = cont.achieved_edof;

        if (options.bits)
        {
            RandomizationResult q = gaussian_randomize(rep.run.E_opt, prob, options.num_draws, seed, options.bits);
            rep.quantized_edof = q.achieved_edof;
            rep.run.recovered_phases = q.schedule;
            rep.run.achieved_edof = q.achieved_edof;
        }
        return rep;
    }
}
