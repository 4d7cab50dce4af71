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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "darisa/experiments.hpp"
#include "darisa/scenario.hpp"

namespace
{
    struct Common
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::string out_dir = ".";
        int threads = 0;
    };

    void add_common(CLI::App *cmd, Common &c)
    {
        cmd->add_option("--config", c.config, "Scenario file (JSON)");
        cmd->add_option("--seed", c.seed, "Base seed; overrides the file and DARISA_SEED");
        cmd->add_option("--trials", c.trials, "Monte Carlo trials per axis point")->check(CLI::PositiveNumber);
        cmd->add_option("--out-dir", c.out_dir, "Directory for CSV and JSON output");
        cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
    }

    darisa::Scenario load(const Common &c)
    {
        darisa::ScenarioOverrides o{c.seed, c.trials};
        if (c.config.empty())
            return darisa::parse_scenario("{}", o);
        return darisa::load_scenario(c.config, o);
    }

    darisa::RunOptions run_options(const Common &c)
    {
        int t = c.threads;
        if (t <= 0)
            t = int(std::max(1u, std::thread::hardware_concurrency()));
        return {t};
    }

    std::string write_file(const Common &c, const std::string &name, const std::string &content)
    {
        std::filesystem::create_directories(c.out_dir);
        const std::filesystem::path path = std::filesystem::path(c.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            darisa::fail(darisa::ErrorKind::config, "cannot write " + path.string());
        out << content;
        if (!out)
            darisa::fail(darisa::ErrorKind::config, "write failed for " + path.string());
        std::cout << path.string() << '\n';
        return path.string();
    }

    template <class F>
    std::string render(F &&f)
    {
        std::ostringstream ss;
        f(ss);
        return ss.str();
    }

    void emit_sweep(const Common &c, const std::string &verb, const darisa::SweepResult &r)
    {
        write_file(c, verb + ".csv", render([&](std::ostream &o) { darisa::write_csv(o, r); }));
        write_file(c, verb + ".json", darisa::to_json(r) + "\n");
    }

    std::string optimize_csv(const darisa::SingleOptimization &s)
    {
        using darisa::format_number;
        const auto &rep = s.report;
        std::ostringstream o;
        o << "series,seed,theorem1_dof,edof_zero_phases,edof_random,relaxed_edof,randomized_edof,quantized_edof,"
             "achieved_edof,zeta_opt,subproblem_solves\n";
        o << s.record.series << ',' << s.record.seed << ',' << s.theorem1_dof << ',' << format_number(s.edof_before)
          << ',' << format_number(s.record.edof_random) << ',' << format_number(rep.relaxed_edof) << ','
          << format_number(rep.randomized_edof) << ','
          << (rep.quantized_edof ? format_number(*rep.quantized_edof) : std::string("nan")) << ','
          << format_number(rep.run.achieved_edof) << ',' << format_number(rep.run.zeta_opt) << ','
          << rep.run.subproblem_solves << '\n';
        return o.str();
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"DARISA MIMO degrees-of-freedom experiments"};
    app.require_subcommand(1);

    Common common;
    struct Verb
    {
        const char *name;
        const char *help;
    };
    const Verb verbs[] = {
        {"dof-sweep", "Numerical rank of H_w along an aperture, spread or element axis"},
        {"eigen-capacity", "Singular values and capacity, random versus optimized phases"},
        {"edof-spacing", "EDoF versus element spacing"},
        {"edof-agility", "EDoF versus agility frequentness K"},
        {"edof-elements", "EDoF versus receive element count"},
        {"edof-bits", "EDoF versus phase quantization bits"},
        {"optimize", "Optimize one channel and print the run record"},
        {"predict", "Theoretical DoF only"},
    };
    for (const auto &v : verbs)
        add_common(app.add_subcommand(v.name, v.help), common);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << darisa::error_json("usage", e.what()) << '\n';
        return 2;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try
    {
        const darisa::Scenario sc = load(common);
        const darisa::RunOptions ro = run_options(common);

        if (verb == "dof-sweep")
            emit_sweep(common, verb, darisa::run_dof_sweep(sc, ro));
        else if (verb == "eigen-capacity")
        {
            const auto r = darisa::run_eigen_capacity(sc, ro);
            write_file(common, verb + "_spectrum.csv", render([&](std::ostream &o) { darisa::write_spectrum_csv(o, r); }));
            write_file(common, verb + "_capacity.csv", render([&](std::ostream &o) { darisa::write_capacity_csv(o, r); }));
            write_file(common, verb + ".json", darisa::to_json(r) + "\n");
        }
        else if (verb == "edof-spacing")
            emit_sweep(common, verb, darisa::run_edof_experiments(sc, "spacing", ro));
        else if (verb == "edof-agility")
            emit_sweep(common, verb, darisa::run_edof_experiments(sc, "K", ro));
        else if (verb == "edof-elements")
            emit_sweep(common, verb, darisa::run_edof_experiments(sc, "element_count", ro));
        else if (verb == "edof-bits")
            emit_sweep(common, verb, darisa::run_edof_experiments(sc, "bits", ro));
        else if (verb == "optimize")
        {
            const auto r = darisa::run_single_optimization(sc);
            write_file(common, verb + ".csv", optimize_csv(r));
            write_file(common, verb + ".json", darisa::to_json(r) + "\n");
        }
        else if (verb == "predict")
        {
            const auto rows = darisa::run_prediction(sc);
            write_file(common, verb + ".csv", render([&](std::ostream &o) { darisa::write_csv(o, rows); }));
            write_file(common, verb + ".json", darisa::to_json(rows) + "\n");
        }
    }
    catch (const darisa::Error &e)
    {
        std::cerr << darisa::error_json(darisa::to_string(e.kind()), e.what()) << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << darisa::error_json("internal", e.what()) << '\n';
        return 1;
    }
    return 0;
}
