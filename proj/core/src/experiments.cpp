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

#include "darisa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "darisa/cluster_channel.hpp"
#include "darisa/metrics.hpp"
#include "darisa/rng.hpp"
#include "darisa/spacetime_channel.hpp"
#include "darisa/wavenumber_dof.hpp"
#include "json.hpp"

namespace darisa
{
    using nlohmann::json;

    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        double from_db(double db) { return std::pow(10.0, db / 10.0); }

        std::vector<double> axis_values(const ScenarioConfig &cfg)
        {
            if (cfg.sweep.values.empty())
                return {0.0};
            return cfg.sweep.values;
        }

        std::vector<double> required_axis_values(const ScenarioConfig &cfg, const std::string &axis)
        {
            if (!cfg.sweep.axis.empty() && cfg.sweep.axis != axis)
                fail(ErrorKind::config, cfg.label + ": sweep axis is '" + cfg.sweep.axis + "' but this experiment needs '" +
                                            axis + "'");
            if (cfg.sweep.values.empty())
                fail(ErrorKind::config, cfg.label + ": sweep values for axis '" + axis + "' are missing");
            return cfg.sweep.values;
        }

        double reference_snr_db(const ScenarioConfig &cfg)
        {
            return cfg.snr_db.empty() ? 0.0 : cfg.snr_db.front();
        }

        OptimizerOptions optimizer_options(const ScenarioConfig &cfg, std::optional<int> bits)
        {
            OptimizerOptions o;
            o.bisection.epsilon = cfg.optimizer.epsilon;
            o.bisection.solver.tol = cfg.optimizer.tol;
            o.bisection.solver.max_iters = cfg.optimizer.max_iters;
            o.num_draws = cfg.optimizer.num_draws;
            o.bits = bits;
            return o;
        }

        struct Capacities
        {
            double exact = 0.0;
            double approx = 0.0;
        };

        Capacities capacities(const CMatrix &H_C, double snr)
        {
            const CMatrix Hn = normalize_for_capacity(H_C);
            return {capacity_exact(Hn, snr), capacity_edof_approx(edof(Hn), snr)};
        }

        void fill_optimized(TrialRecord &rec, const SdrProblem &prob, const std::vector<double> &phases,
                            double relaxed, const DinkelbachRun &run, double snr)
        {
            const CMatrix H = composite_from_phases(prob, phases);
            rec.edof_optimized = edof(H);
            rec.edof_relaxed = relaxed;
            const Capacities c = capacities(H, snr);
            rec.capacity_exact_optimized = c.exact;
            rec.capacity_approx_optimized = c.approx;
            rec.zeta_opt = run.zeta_opt;
            rec.subproblem_solves = run.subproblem_solves;
            rec.trace = run.iterations;
            rec.optimized = true;
        }

        void mark_failed(TrialRecord &rec, const std::string &msg)
        {
            rec.optimized = false;
            rec.error = msg;
            rec.edof_optimized = rec.edof_relaxed = kNaN;
            rec.capacity_exact_optimized = rec.capacity_approx_optimized = kNaN;
        }

        template <class F>
        Stat stat_of(const std::vector<TrialRecord> &recs, std::size_t begin, std::size_t count, F field)
        {
            std::vector<double> v;
            v.reserve(count);
            for (std::size_t i = begin; i < begin + count; ++i)
                v.push_back(field(recs[i]));
            return summarize(v);
        }

        SweepRow aggregate(const std::vector<TrialRecord> &recs, std::size_t begin, int trials,
                           const ScenarioConfig &cfg, double axis_value)
        {
            SweepRow row;
            row.series = cfg.label;
            row.axis_value = axis_value;
            row.trials = trials;
            for (int t = 0; t < trials; ++t)
                if (!recs[begin + t].error.empty())
                    ++row.failures;
            const std::size_t n = std::size_t(trials);
            row.rank = stat_of(recs, begin, n, [](const TrialRecord &r) { return double(r.rank); });
            row.edof_random = stat_of(recs, begin, n, [](const TrialRecord &r) { return r.edof_random; });
            row.edof_optimized = stat_of(recs, begin, n, [](const TrialRecord &r) { return r.edof_optimized; });
            row.edof_relaxed = stat_of(recs, begin, n, [](const TrialRecord &r) { return r.edof_relaxed; });
            row.capacity_exact_random =
                stat_of(recs, begin, n, [](const TrialRecord &r) { return r.capacity_exact_random; });
            row.capacity_approx_random =
                stat_of(recs, begin, n, [](const TrialRecord &r) { return r.capacity_approx_random; });
            row.capacity_exact_optimized =
                stat_of(recs, begin, n, [](const TrialRecord &r) { return r.capacity_exact_optimized; });
            row.capacity_approx_optimized =
                stat_of(recs, begin, n, [](const TrialRecord &r) { return r.capacity_approx_optimized; });
            const DofPrediction p = predict_dof(cfg.tx, cfg.rx, cfg.clusters, cfg.K);
            row.lemma1_dof = p.lemma1_dof;
            row.theorem1_dof = p.theorem1_dof;
            row.reference_snr_db = reference_snr_db(cfg);
            return row;
        }

        json stat_json(const Stat &s)
        {
            return json{{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
        }

        json trial_json(const TrialRecord &r)
        {
            json j{{"series", r.series},
                   {"axis_value", r.axis_value},
                   {"trial", r.trial},
                   {"seed", r.seed},
                   {"rank", r.rank},
                   {"edof_random", r.edof_random},
                   {"capacity_exact_random", r.capacity_exact_random},
                   {"capacity_approx_random", r.capacity_approx_random}};
            if (r.optimized)
            {
                j["edof_optimized"] = r.edof_optimized;
                j["edof_relaxed"] = r.edof_relaxed;
                j["capacity_exact_optimized"] = r.capacity_exact_optimized;
                j["capacity_approx_optimized"] = r.capacity_approx_optimized;
                j["zeta_opt"] = r.zeta_opt;
                j["subproblem_solves"] = r.subproblem_solves;
                json trace = json::array();
                for (const auto &s : r.trace)
                    trace.push_back({{"zeta", s.zeta},
                                     {"F", s.F},
                                     {"F_upper", std::isfinite(s.F_upper) ? json(s.F_upper) : json(nullptr)},
                                     {"solver_iterations", s.solver_iterations}});
                j["bisection"] = trace;
            }
            if (!r.error.empty())
                j["error"] = r.error;
            return j;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            return out + "\"";
        }
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

    Stat summarize(const std::vector<double> &values)
    {
        Stat s;
        double sum = 0.0;
        for (double v : values)
            if (!std::isnan(v))
            {
                sum += v;
                ++s.count;
            }
        if (s.count == 0)
        {
            s.mean = s.std = kNaN;
            return s;
        }
        s.mean = sum / s.count;
        double ss = 0.0;
        for (double v : values)
            if (!std::isnan(v))
                ss += (v - s.mean) * (v - s.mean);
        s.std = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
        return s;
    }

    void parallel_for(int count, int threads, const std::function<void(int)> &fn)
    {
        if (count <= 0)
            return;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next++; i < count; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    errors[std::size_t(i)] = std::current_exception();
                }
            }
        };
        const int n = std::clamp(threads, 1, count);
        if (n == 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int i = 0; i < n; ++i)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    CMatrix composite_from_phases(const SdrProblem &prob, const std::vector<double> &rx_phases)
    {
        if (rx_phases.size() != std::size_t(prob.block_count()) * std::size_t(prob.N_r))
            fail(ErrorKind::dimension_mismatch, "receive phase count does not match the problem");
        CMatrix H(prob.block_count(), prob.M);
        CVector q(prob.N_r);
        for (int b = 0; b < prob.block_count(); ++b)
        {
            for (int i = 0; i < prob.N_r; ++i)
                q(i) = std::polar(1.0, rx_phases[std::size_t(b) * prob.N_r + i]);
            H.row(b) = q.adjoint() * prob.block(b);
        }
        return H;
    }

    CMatrix normalize_for_capacity(const CMatrix &H)
    {
        const double fro2 = H.squaredNorm();
        if (fro2 <= 0.0)
            return H;
        return H * std::sqrt(double(H.cols()) / fro2);
    }

    SweepResult run_dof_sweep(const Scenario &scenario, const RunOptions &options)
    {
        SweepResult res;
        res.experiment = "dof-sweep";
        res.axis = scenario.series.front().sweep.axis;

        struct Unit
        {
            std::size_t series, slot;
            int trial;
            double value;
        };
        std::vector<Unit> units;
        std::vector<std::size_t> row_begin;
        for (std::size_t s = 0; s < scenario.series.size(); ++s)
        {
            const auto values = axis_values(scenario.series[s]);
            for (std::size_t a = 0; a < values.size(); ++a)
            {
                row_begin.push_back(res.trials.size());
                for (int t = 0; t < scenario.series[s].trials; ++t)
                {
                    units.push_back({s, res.trials.size(), t, values[a]});
                    res.trials.emplace_back();
                }
            }
        }

        parallel_for(int(units.size()), options.threads, [&](int i) {
            const Unit &u = units[std::size_t(i)];
            const ScenarioConfig &base = scenario.series[u.series];
            const ScenarioConfig cfg = apply_axis(base, base.sweep.axis, u.value);
            TrialRecord &rec = res.trials[u.slot];
            rec.series = cfg.label;
            rec.axis_value = u.value;
            rec.trial = u.trial;
            rec.seed = trial_seed(cfg.seed, std::uint64_t(rec.trial));
            const ChannelRealization ch = generate_channel(cfg.clusters, cfg.tx, cfg.rx, rec.seed);
            const CMatrix core = ch.spectral_core();
            rec.rank = core.size() ? spectrum(core, cfg.rank_threshold).numerical_rank : 0;
            rec.edof_random = rec.edof_optimized = rec.edof_relaxed = kNaN;
            rec.capacity_exact_random = rec.capacity_approx_random = kNaN;
            rec.capacity_exact_optimized = rec.capacity_approx_optimized = kNaN;
        });

        std::size_t r = 0;
        for (std::size_t s = 0; s < scenario.series.size(); ++s)
        {
            const ScenarioConfig &base = scenario.series[s];
            for (double v : axis_values(base))
            {
                const ScenarioConfig cfg = apply_axis(base, base.sweep.axis, v);
                res.rows.push_back(aggregate(res.trials, row_begin[r++], cfg.trials, cfg, v));
            }
        }
        return res;
    }

    SweepResult run_edof_experiments(const Scenario &scenario, const std::string &axis, const RunOptions &options)
    {
        static const std::set<std::string> allowed{"spacing", "K", "element_count", "bits"};
        if (!allowed.count(axis))
            fail(ErrorKind::invalid_argument, "unsupported EDoF axis '" + axis + "'");

        SweepResult res;
        res.experiment = "edof-" + axis;
        res.axis = axis;
        res.has_optimizer = true;

        // records laid out series-major, then axis point, then trial
        std::vector<std::vector<double>> values;
        std::vector<std::size_t> series_begin;
        for (const auto &cfg : scenario.series)
        {
            values.push_back(required_axis_values(cfg, axis));
            series_begin.push_back(res.trials.size());
            res.trials.resize(res.trials.size() + values.back().size() * std::size_t(cfg.trials));
        }

        struct Unit
        {
            std::size_t series;
            int trial;
        };
        std::vector<Unit> units;
        for (std::size_t s = 0; s < scenario.series.size(); ++s)
            for (int t = 0; t < scenario.series[s].trials; ++t)
                units.push_back({s, t});

        parallel_for(int(units.size()), options.threads, [&](int i) {
            const Unit u = units[std::size_t(i)];
            const ScenarioConfig &base = scenario.series[u.series];
            const std::uint64_t seed = trial_seed(base.seed, std::uint64_t(u.trial));
            std::optional<ChannelRealization> channel;
            ArrayConfig channel_tx, channel_rx;
            std::optional<DinkelbachRun> shared_run;

            for (std::size_t a = 0; a < values[u.series].size(); ++a)
            {
                const double v = values[u.series][a];
                const ScenarioConfig cfg = apply_axis(base, axis, v);
                TrialRecord &rec = res.trials[series_begin[u.series] + a * std::size_t(base.trials) + std::size_t(u.trial)];
                rec.series = cfg.label;
                rec.axis_value = v;
                rec.trial = u.trial;
                rec.seed = seed;

                if (!channel || !(channel_tx == cfg.tx) || !(channel_rx == cfg.rx))
                {
                    channel = generate_channel(cfg.clusters, cfg.tx, cfg.rx, seed);
                    channel_tx = cfg.tx;
                    channel_rx = cfg.rx;
                    shared_run.reset();
                }
                const DofPrediction pred = predict_dof(cfg.tx, cfg.rx, cfg.clusters, cfg.K);
                const SdrProblem prob =
                    build_sdr_problem(channel->H_w, PhaseSchedule::zeros(cfg.K, cfg.tx, cfg.rx), pred.theorem1_dof);
                const double snr = from_db(reference_snr_db(cfg));

                const PhaseSchedule random = PhaseSchedule::random(cfg.K, cfg.tx, cfg.rx, seed, false);
                const CMatrix H_rand = composite_from_phases(prob, random.rx_phases());
                rec.edof_random = edof(H_rand);
                rec.rank = spectrum(H_rand, cfg.rank_threshold).numerical_rank;
                const Capacities cr = capacities(H_rand, snr);
                rec.capacity_exact_random = cr.exact;
                rec.capacity_approx_random = cr.approx;

                try
                {
                    if (axis == "bits")
                    {
                        if (!shared_run)
                            shared_run = dinkelbach_bisect(prob, optimizer_options(cfg, std::nullopt).bisection);
                        const std::optional<int> bits = v > 0.0 ? std::optional<int>(int(std::lround(v))) : std::nullopt;
                        const RandomizationResult rr =
                            gaussian_randomize(shared_run->E_opt, prob, cfg.optimizer.num_draws, seed, bits);
                        fill_optimized(rec, prob, rr.schedule.rx_phases(), shared_run->zeta_opt * shared_run->zeta_opt,
                                       *shared_run, snr);
                    }
                    else
                    {
                        const OptimizationReport rep =
                            optimize_receive_phases(prob, optimizer_options(cfg, cfg.quantization_bits), seed);
                        fill_optimized(rec, prob, rep.run.recovered_phases.rx_phases(), rep.relaxed_edof, rep.run, snr);
                    }
                }
                catch (const Error &e)
                {
                    if (e.kind() != ErrorKind::solver_failure)
                        throw;
                    mark_failed(rec, e.what());
                }
            }
        });

        for (std::size_t s = 0; s < scenario.series.size(); ++s)
        {
            const ScenarioConfig &base = scenario.series[s];
            for (std::size_t a = 0; a < values[s].size(); ++a)
            {
                const ScenarioConfig cfg = apply_axis(base, axis, values[s][a]);
                res.rows.push_back(aggregate(res.trials, series_begin[s] + a * std::size_t(base.trials), base.trials,
                                             cfg, values[s][a]));
            }
        }
        return res;
    }

    EigenCapacityResult run_eigen_capacity(const Scenario &scenario, const RunOptions &options)
    {
        struct TrialSpectra
        {
            RVector s[2];
            double edof[2] = {kNaN, kNaN};
            double spread[2] = {kNaN, kNaN};
            std::vector<double> exact[2], approx[2];
            bool ok[2] = {false, false};
        };

        EigenCapacityResult res;
        std::vector<std::size_t> begin;
        for (const auto &cfg : scenario.series)
        {
            begin.push_back(res.trials.size());
            res.trials.resize(res.trials.size() + std::size_t(cfg.trials));
        }
        std::vector<TrialSpectra> spectra(res.trials.size());

        parallel_for(int(res.trials.size()), options.threads, [&](int i) {
            std::size_t s = 0;
            while (s + 1 < begin.size() && begin[s + 1] <= std::size_t(i))
                ++s;
            const ScenarioConfig &cfg = scenario.series[s];
            TrialRecord &rec = res.trials[std::size_t(i)];
            TrialSpectra &ts = spectra[std::size_t(i)];
            rec.series = cfg.label;
            rec.trial = int(std::size_t(i) - begin[s]);
            rec.seed = trial_seed(cfg.seed, std::uint64_t(rec.trial));

            const ChannelRealization ch = generate_channel(cfg.clusters, cfg.tx, cfg.rx, rec.seed);
            const DofPrediction pred = predict_dof(cfg.tx, cfg.rx, cfg.clusters, cfg.K);
            const SdrProblem prob =
                build_sdr_problem(ch.H_w, PhaseSchedule::zeros(cfg.K, cfg.tx, cfg.rx), pred.theorem1_dof);
            const double ref_snr = from_db(reference_snr_db(cfg));

            auto analyse = [&](int scheme, const std::vector<double> &phases) {
                const CMatrix H = normalize_for_capacity(composite_from_phases(prob, phases));
                ts.s[scheme] = Eigen::BDCSVD<CMatrix>(H).singularValues();
                ts.edof[scheme] = edof(H);
                const int d = std::min<int>(pred.theorem1_dof, int(ts.s[scheme].size()));
                if (d >= 1 && ts.s[scheme](d - 1) > 0.0)
                    ts.spread[scheme] = std::pow(ts.s[scheme](0) / ts.s[scheme](d - 1), 2);
                for (double db : cfg.snr_db)
                {
                    ts.exact[scheme].push_back(capacity_exact(H, from_db(db)));
                    ts.approx[scheme].push_back(capacity_edof_approx(ts.edof[scheme], from_db(db)));
                }
                ts.ok[scheme] = true;
            };

            const PhaseSchedule random = PhaseSchedule::random(cfg.K, cfg.tx, cfg.rx, rec.seed, false);
            analyse(0, random.rx_phases());
            rec.edof_random = ts.edof[0];
            const CMatrix H_rand = composite_from_phases(prob, random.rx_phases());
            rec.rank = spectrum(H_rand, cfg.rank_threshold).numerical_rank;
            const Capacities cr = capacities(H_rand, ref_snr);
            rec.capacity_exact_random = cr.exact;
            rec.capacity_approx_random = cr.approx;
            try
            {
                const OptimizationReport rep =
                    optimize_receive_phases(prob, optimizer_options(cfg, cfg.quantization_bits), rec.seed);
                analyse(1, rep.run.recovered_phases.rx_phases());
                fill_optimized(rec, prob, rep.run.recovered_phases.rx_phases(), rep.relaxed_edof, rep.run, ref_snr);
            }
            catch (const Error &e)
            {
                if (e.kind() != ErrorKind::solver_failure)
                    throw;
                mark_failed(rec, e.what());
            }
        });

        static const char *scheme_name[2] = {"random", "optimized"};
        for (std::size_t s = 0; s < scenario.series.size(); ++s)
        {
            const ScenarioConfig &cfg = scenario.series[s];
            for (int scheme = 0; scheme < 2; ++scheme)
            {
                SpectrumCurve curve;
                curve.series = cfg.label;
                curve.scheme = scheme_name[scheme];
                std::vector<double> e, sp;
                int used = 0;
                for (int t = 0; t < cfg.trials; ++t)
                {
                    const TrialSpectra &ts = spectra[begin[s] + std::size_t(t)];
                    if (!ts.ok[scheme])
                    {
                        ++curve.failures;
                        continue;
                    }
                    if (curve.lambda_mean.empty())
                    {
                        curve.lambda_mean.assign(std::size_t(ts.s[scheme].size()), 0.0);
                        curve.lambda2_mean.assign(std::size_t(ts.s[scheme].size()), 0.0);
                    }
                    for (Eigen::Index k = 0; k < ts.s[scheme].size(); ++k)
                    {
                        curve.lambda_mean[std::size_t(k)] += ts.s[scheme](k);
                        curve.lambda2_mean[std::size_t(k)] += ts.s[scheme](k) * ts.s[scheme](k);
                    }
                    e.push_back(ts.edof[scheme]);
                    sp.push_back(ts.spread[scheme]);
                    ++used;
                }
                for (auto &x : curve.lambda_mean)
                    x /= used;
                for (auto &x : curve.lambda2_mean)
                    x /= used;
                curve.edof = summarize(e);
                curve.spread = summarize(sp);
                res.spectra.push_back(std::move(curve));

                for (std::size_t k = 0; k < cfg.snr_db.size(); ++k)
                {
                    std::vector<double> ex, ap;
                    for (int t = 0; t < cfg.trials; ++t)
                    {
                        const TrialSpectra &ts = spectra[begin[s] + std::size_t(t)];
                        if (!ts.ok[scheme])
                            continue;
                        ex.push_back(ts.exact[scheme][k]);
                        ap.push_back(ts.approx[scheme][k]);
                    }
                    res.capacity.push_back({cfg.label, scheme_name[scheme], cfg.snr_db[k], summarize(ex), summarize(ap)});
                }
            }
        }
        return res;
    }

    std::vector<PredictionRow> run_prediction(const Scenario &scenario)
    {
        std::vector<PredictionRow> rows;
        for (const auto &base : scenario.series)
            for (double v : axis_values(base))
            {
                const ScenarioConfig cfg = apply_axis(base, base.sweep.axis, v);
                PredictionRow r;
                r.series = cfg.label;
                r.axis_value = v;
                const SupportEllipse et = support_ellipse(cfg.clusters, Side::transmit);
                const SupportEllipse er = support_ellipse(cfg.clusters, Side::receive);
                r.c1_t = et.c1;
                r.c2_t = et.c2;
                r.c1_r = er.c1;
                r.c2_r = er.c2;
                const DofPrediction p = predict_dof(cfg.tx, cfg.rx, cfg.clusters, cfg.K);
                r.d_t = p.d_t;
                r.d_r = p.d_r;
                r.lemma1_dof = p.lemma1_dof;
                r.theorem1_dof = p.theorem1_dof;
                r.lattice_t = lattice_cardinality(array_aperture(cfg.tx));
                r.lattice_r = lattice_cardinality(array_aperture(cfg.rx));
                rows.push_back(r);
            }
        return rows;
    }

    SingleOptimization run_single_optimization(const Scenario &scenario)
    {
        const ScenarioConfig &cfg = scenario.series.front();
        SingleOptimization out;
        TrialRecord &rec = out.record;
        rec.series = cfg.label;
        rec.seed = trial_seed(cfg.seed, 0);
        const ChannelRealization ch = generate_channel(cfg.clusters, cfg.tx, cfg.rx, rec.seed);
        const DofPrediction pred = predict_dof(cfg.tx, cfg.rx, cfg.clusters, cfg.K);
        out.theorem1_dof = pred.theorem1_dof;
        const SdrProblem prob =
            build_sdr_problem(ch.H_w, PhaseSchedule::zeros(cfg.K, cfg.tx, cfg.rx), pred.theorem1_dof);
        const double snr = from_db(reference_snr_db(cfg));
        out.edof_before = phase_edof(prob, std::vector<double>(prob.schedule.rx_phases().size(), 0.0));

        const PhaseSchedule random = PhaseSchedule::random(cfg.K, cfg.tx, cfg.rx, rec.seed, false);
        const CMatrix H_rand = composite_from_phases(prob, random.rx_phases());
        rec.edof_random = edof(H_rand);
        rec.rank = spectrum(H_rand, cfg.rank_threshold).numerical_rank;
        const Capacities cr = capacities(H_rand, snr);
        rec.capacity_exact_random = cr.exact;
        rec.capacity_approx_random = cr.approx;

        out.report = optimize_receive_phases(prob, optimizer_options(cfg, cfg.quantization_bits), rec.seed);
        fill_optimized(rec, prob, out.report.run.recovered_phases.rx_phases(), out.report.relaxed_edof, out.report.run,
                       snr);
        return out;
    }

    void write_csv(std::ostream &out, const SweepResult &r)
    {
        out << "series," << (r.axis.empty() ? "axis" : r.axis) << ",trials,failures,rank_mean,rank_std";
        if (r.has_optimizer)
            out << ",edof_random_mean,edof_random_std,edof_optimized_mean,edof_optimized_std,edof_relaxed_mean"
                   ",snr_db,capacity_exact_random,capacity_approx_random,capacity_exact_optimized"
                   ",capacity_approx_optimized";
        out << ",lemma1_dof,theorem1_dof,dof_theory\n";
        for (const auto &row : r.rows)
        {
            out << csv_field(row.series) << ',' << format_number(row.axis_value) << ',' << row.trials << ','
                << row.failures << ',' << format_number(row.rank.mean) << ',' << format_number(row.rank.std);
            if (r.has_optimizer)
                out << ',' << format_number(row.edof_random.mean) << ',' << format_number(row.edof_random.std) << ','
                    << format_number(row.edof_optimized.mean) << ',' << format_number(row.edof_optimized.std) << ','
                    << format_number(row.edof_relaxed.mean) << ',' << format_number(row.reference_snr_db) << ','
                    << format_number(row.capacity_exact_random.mean) << ','
                    << format_number(row.capacity_approx_random.mean) << ','
                    << format_number(row.capacity_exact_optimized.mean) << ','
                    << format_number(row.capacity_approx_optimized.mean);
            out << ',' << format_number(row.lemma1_dof) << ',' << row.theorem1_dof << ','
                << (r.has_optimizer ? format_number(row.theorem1_dof) : format_number(row.lemma1_dof)) << '\n';
        }
    }

    void write_csv(std::ostream &out, const std::vector<PredictionRow> &rows)
    {
        out << "series,axis_value,c1_t,c2_t,c1_r,c2_r,d_t,d_r,lattice_t,lattice_r,lemma1_dof,theorem1_dof\n";
        for (const auto &r : rows)
            out << csv_field(r.series) << ',' << format_number(r.axis_value) << ',' << format_number(r.c1_t) << ','
                << format_number(r.c2_t) << ',' << format_number(r.c1_r) << ',' << format_number(r.c2_r) << ','
                << format_number(r.d_t) << ',' << format_number(r.d_r) << ',' << r.lattice_t << ',' << r.lattice_r
                << ',' << format_number(r.lemma1_dof) << ',' << r.theorem1_dof << '\n';
    }

    void write_spectrum_csv(std::ostream &out, const EigenCapacityResult &r)
    {
        out << "series,scheme,index,lambda_mean,lambda2_mean,edof_mean,edof_std,spread_mean,failures\n";
        for (const auto &c : r.spectra)
            for (std::size_t k = 0; k < c.lambda_mean.size(); ++k)
                out << csv_field(c.series) << ',' << c.scheme << ',' << k + 1 << ',' << format_number(c.lambda_mean[k])
                    << ',' << format_number(c.lambda2_mean[k]) << ',' << format_number(c.edof.mean) << ','
                    << format_number(c.edof.std) << ',' << format_number(c.spread.mean) << ',' << c.failures << '\n';
    }

    void write_capacity_csv(std::ostream &out, const EigenCapacityResult &r)
    {
        out << "series,scheme,snr_db,capacity_exact_mean,capacity_exact_std,capacity_approx_mean,capacity_approx_std\n";
        for (const auto &p : r.capacity)
            out << csv_field(p.series) << ',' << p.scheme << ',' << format_number(p.snr_db) << ','
                << format_number(p.exact.mean) << ',' << format_number(p.exact.std) << ','
                << format_number(p.approx.mean) << ',' << format_number(p.approx.std) << '\n';
    }

    std::string to_json(const SweepResult &r)
    {
        json rows = json::array();
        for (const auto &row : r.rows)
            rows.push_back({{"series", row.series},
                            {"axis_value", row.axis_value},
                            {"trials", row.trials},
                            {"failures", row.failures},
                            {"rank", stat_json(row.rank)},
                            {"edof_random", stat_json(row.edof_random)},
                            {"edof_optimized", stat_json(row.edof_optimized)},
                            {"edof_relaxed", stat_json(row.edof_relaxed)},
                            {"capacity_exact_random", stat_json(row.capacity_exact_random)},
                            {"capacity_approx_random", stat_json(row.capacity_approx_random)},
                            {"capacity_exact_optimized", stat_json(row.capacity_exact_optimized)},
                            {"capacity_approx_optimized", stat_json(row.capacity_approx_optimized)},
                            {"reference_snr_db", row.reference_snr_db},
                            {"lemma1_dof", row.lemma1_dof},
                            {"theorem1_dof", row.theorem1_dof}});
        json trials = json::array();
        for (const auto &t : r.trials)
            trials.push_back(trial_json(t));
        return json{{"experiment", r.experiment}, {"axis", r.axis}, {"rows", rows}, {"trials", trials}}.dump(2);
    }

    std::string to_json(const EigenCapacityResult &r)
    {
        json spectra = json::array();
        for (const auto &c : r.spectra)
            spectra.push_back({{"series", c.series},
                               {"scheme", c.scheme},
                               {"lambda_mean", c.lambda_mean},
                               {"lambda2_mean", c.lambda2_mean},
                               {"edof", stat_json(c.edof)},
                               {"spread", stat_json(c.spread)},
                               {"failures", c.failures}});
        json cap = json::array();
        for (const auto &p : r.capacity)
            cap.push_back({{"series", p.series},
                           {"scheme", p.scheme},
                           {"snr_db", p.snr_db},
                           {"exact", stat_json(p.exact)},
                           {"approx", stat_json(p.approx)}});
        json trials = json::array();
        for (const auto &t : r.trials)
            trials.push_back(trial_json(t));
        return json{{"experiment", "eigen-capacity"}, {"spectra", spectra}, {"capacity", cap}, {"trials", trials}}
            .dump(2);
    }

    std::string to_json(const std::vector<PredictionRow> &rows)
    {
        json out = json::array();
        for (const auto &r : rows)
            out.push_back({{"series", r.series},
                           {"axis_value", r.axis_value},
                           {"c1_t", r.c1_t},
                           {"c2_t", r.c2_t},
                           {"c1_r", r.c1_r},
                           {"c2_r", r.c2_r},
                           {"d_t", r.d_t},
                           {"d_r", r.d_r},
                           {"lattice_t", r.lattice_t},
                           {"lattice_r", r.lattice_r},
                           {"lemma1_dof", r.lemma1_dof},
                           {"theorem1_dof", r.theorem1_dof}});
        return json{{"experiment", "predict"}, {"rows", out}}.dump(2);
    }

    std::string to_json(const SingleOptimization &o)
    {
        const auto &run = o.report.run;
        json j = trial_json(o.record);
        j["experiment"] = "optimize";
        j["theorem1_dof"] = o.theorem1_dof;
        j["edof_zero_phases"] = o.edof_before;
        j["zeta_bracket"] = {{"low", run.zeta_low}, {"high", run.zeta_high}, {"initial_high", run.zeta_upper_initial}};
        j["F_at_bracket"] = {{"low", run.F_low}, {"high", run.F_high}};
        j["relaxed_edof"] = o.report.relaxed_edof;
        j["randomized_edof"] = o.report.randomized_edof;
        j["quantized_edof"] = o.report.quantized_edof ? json(*o.report.quantized_edof) : json(nullptr);
        j["achieved_edof"] = run.achieved_edof;
        j["relaxed_rank"] = run.E_opt.rank;
        j["rx_phases"] = run.recovered_phases.rx_phases();
        return j.dump(2);
    }

    std::string error_json(const std::string &kind, const std::string &message)
    {
        return json{{"error", {{"kind", kind}, {"message", message}}}}.dump();
    }
}
