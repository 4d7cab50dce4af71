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

#include "darisa/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace darisa
{
    using nlohmann::json;

    double degrees(double r) { return r * 180.0 / kPi; }
    double radians(double d) { return d * kPi / 180.0; }

    namespace
    {
        [[noreturn]] void config_error(const std::string &msg)
        {
            fail(ErrorKind::config, msg);
        }

        void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            if (!j.is_object())
                config_error(where + " must be an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!allowed.count(it.key()))
                    config_error("unknown key '" + it.key() + "' in " + where);
        }

        template <class T>
        T get(const json &j, const std::string &key, const std::string &where)
        {
            try
            {
                return j.at(key).get<T>();
            }
            catch (const json::exception &e)
            {
                config_error(where + "." + key + ": " + e.what());
            }
        }

        ArrayConfig parse_array(const json &j, Side side, const std::string &where)
        {
            check_keys(j, {"n", "n_x", "n_y", "spacing", "aperture", "count"}, where);
            ArrayConfig a;
            a.side = side;
            if (j.contains("n"))
                a.n_x = a.n_y = get<int>(j, "n", where);
            if (j.contains("n_x"))
                a.n_x = get<int>(j, "n_x", where);
            if (j.contains("n_y"))
                a.n_y = get<int>(j, "n_y", where);
            if (j.contains("count"))
                a.darisa_count = get<int>(j, "count", where);
            if (j.contains("spacing") && j.contains("aperture"))
                config_error(where + ": give either spacing or aperture");
            if (j.contains("spacing"))
                a.spacing = get<double>(j, "spacing", where);
            else if (j.contains("aperture"))
            {
                if (a.n_x != a.n_y)
                    config_error(where + ": aperture needs a square element grid");
                a.spacing = get<double>(j, "aperture", where) / a.n_x;
            }
            try
            {
                a.validate();
            }
            catch (const Error &e)
            {
                config_error(where + ": " + e.what());
            }
            return a;
        }

        void parse_support(const json &j, AngularSupport &s, const std::string &where)
        {
            check_keys(j, {"center_azimuth", "center_zenith", "spread_azimuth", "spread_zenith"}, where);
            if (j.contains("center_azimuth"))
                s.center_azimuth = radians(get<double>(j, "center_azimuth", where));
            if (j.contains("center_zenith"))
                s.center_zenith = radians(get<double>(j, "center_zenith", where));
            if (j.contains("spread_azimuth"))
                s.spread_azimuth = radians(get<double>(j, "spread_azimuth", where));
            if (j.contains("spread_zenith"))
                s.spread_zenith = radians(get<double>(j, "spread_zenith", where));
        }

        ClusterSet parse_clusters(const json &j)
        {
            if (j.is_string())
            {
                if (j.get<std::string>() != "isotropic")
                    config_error("clusters: the only string form is \"isotropic\"");
                return ClusterSet{{Cluster::isotropic()}};
            }
            if (!j.is_array() || j.empty())
                config_error("clusters must be \"isotropic\" or a non-empty array");
            ClusterSet set;
            for (std::size_t i = 0; i < j.size(); ++i)
            {
                const std::string where = "clusters[" + std::to_string(i) + "]";
                check_keys(j[i], {"both", "departure", "arrival"}, where);
                Cluster c = Cluster::isotropic();
                if (j[i].contains("both"))
                {
                    parse_support(j[i]["both"], c.departure, where + ".both");
                    parse_support(j[i]["both"], c.arrival, where + ".both");
                }
                if (j[i].contains("departure"))
                    parse_support(j[i]["departure"], c.departure, where + ".departure");
                if (j[i].contains("arrival"))
                    parse_support(j[i]["arrival"], c.arrival, where + ".arrival");
                set.clusters.push_back(c);
            }
            try
            {
                set.validate();
            }
            catch (const Error &e)
            {
                config_error(std::string("clusters: ") + e.what());
            }
            return set;
        }

        std::uint64_t parse_seed(const json &j)
        {
            if (j.is_number_unsigned())
                return j.get<std::uint64_t>();
            if (j.is_number_integer() && j.get<long long>() >= 0)
                return std::uint64_t(j.get<long long>());
            if (j.is_string())
            {
                const std::string s = j.get<std::string>();
                char *end = nullptr;
                const unsigned long long v = std::strtoull(s.c_str(), &end, 0);
                if (end && *end == '\0' && !s.empty())
                    return v;
            }
            config_error("seed must be a non-negative integer");
        }

        std::optional<std::uint64_t> environment_seed()
        {
            const char *env = std::getenv(kSeedEnvironmentVariable);
            if (!env || !*env)
                return std::nullopt;
            char *end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 0);
            if (!end || *end != '\0')
                config_error(std::string(kSeedEnvironmentVariable) + " is not an integer");
            return v;
        }

        ScenarioConfig parse_config(const json &j, const std::string &label)
        {
            check_keys(j, {"label", "tx", "rx", "clusters", "K", "snr_db", "trials", "seed", "rank_threshold",
                           "quantization_bits", "optimizer", "sweep", "series", "description"},
                       "scenario");
            ScenarioConfig c;
            c.label = j.contains("label") ? get<std::string>(j, "label", "scenario") : label;
            if (j.contains("tx"))
                c.tx = parse_array(j["tx"], Side::transmit, "tx");
            if (j.contains("rx"))
                c.rx = parse_array(j["rx"], Side::receive, "rx");
            if (j.contains("clusters"))
                c.clusters = parse_clusters(j["clusters"]);
            if (j.contains("K"))
                c.K = get<int>(j, "K", "scenario");
            if (j.contains("snr_db"))
                c.snr_db = get<std::vector<double>>(j, "snr_db", "scenario");
            if (j.contains("trials"))
                c.trials = get<int>(j, "trials", "scenario");
            if (auto env = environment_seed())
                c.seed = *env;
            if (j.contains("seed"))
                c.seed = parse_seed(j["seed"]);
            if (j.contains("rank_threshold"))
                c.rank_threshold = get<double>(j, "rank_threshold", "scenario");
            if (j.contains("quantization_bits") && !j["quantization_bits"].is_null())
                c.quantization_bits = get<int>(j, "quantization_bits", "scenario");
            if (j.contains("optimizer"))
            {
                const json &o = j["optimizer"];
                check_keys(o, {"epsilon", "tol", "max_iters", "num_draws"}, "optimizer");
                if (o.contains("epsilon"))
                    c.optimizer.epsilon = get<double>(o, "epsilon", "optimizer");
                if (o.contains("tol"))
                    c.optimizer.tol = get<double>(o, "tol", "optimizer");
                if (o.contains("max_iters"))
                    c.optimizer.max_iters = get<int>(o, "max_iters", "optimizer");
                if (o.contains("num_draws"))
                    c.optimizer.num_draws = get<int>(o, "num_draws", "optimizer");
            }
            if (j.contains("sweep"))
            {
                const json &s = j["sweep"];
                check_keys(s, {"axis", "values"}, "sweep");
                c.sweep.axis = get<std::string>(s, "axis", "sweep");
                c.sweep.values = get<std::vector<double>>(s, "values", "sweep");
            }
            return c;
        }

        ArrayConfig resized(ArrayConfig a, int n, double aperture)
        {
            a.n_x = a.n_y = n;
            a.spacing = aperture / double(n);
            return a;
        }

        int element_count_for(double aperture, double spacing)
        {
            const double n = aperture / spacing;
            const double r = std::round(n);
            if (r < 1.0 || std::abs(n - r) > 1e-6)
                config_error("spacing " + std::to_string(spacing) + " does not divide the aperture " +
                             std::to_string(aperture));
            return int(r);
        }
    }

    void ScenarioConfig::validate() const
    {
        try
        {
            tx.validate();
            rx.validate();
            clusters.validate();
        }
        catch (const Error &e)
        {
            config_error(label + ": " + e.what());
        }
        if (tx.side != Side::transmit || rx.side != Side::receive)
            config_error(label + ": array sides are swapped");
        if (K < 1)
            config_error(label + ": K must be at least 1");
        if (trials < 1)
            config_error(label + ": trials must be at least 1");
        for (double s : snr_db)
            if (!std::isfinite(s))
                config_error(label + ": snr values must be finite");
        if (!(rank_threshold > 0.0 && rank_threshold < 1.0))
            config_error(label + ": rank_threshold must lie in (0, 1)");
        if (quantization_bits && *quantization_bits < 1)
            config_error(label + ": quantization_bits must be at least 1");
        if (!(optimizer.epsilon > 0.0) || !(optimizer.tol > 0.0) || optimizer.max_iters < 1 ||
            optimizer.num_draws < 1)
            config_error(label + ": optimizer knobs out of range");
    }

    Scenario parse_scenario(const std::string &text, const ScenarioOverrides &overrides)
    {
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            config_error(std::string("scenario is not valid JSON: ") + e.what());
        }
        if (!root.is_object())
            config_error("scenario must be a JSON object");

        Scenario sc;
        std::vector<std::pair<json, std::string>> docs;
        if (root.contains("series"))
        {
            const json &series = root["series"];
            if (!series.is_array() || series.empty())
                config_error("series must be a non-empty array");
            json base = root;
            base.erase("series");
            for (std::size_t i = 0; i < series.size(); ++i)
            {
                json doc = base;
                doc.merge_patch(series[i]);
                docs.emplace_back(doc, "series" + std::to_string(i));
            }
        }
        else
            docs.emplace_back(root, "default");

        for (auto &[doc, label] : docs)
        {
            ScenarioConfig c = parse_config(doc, label);
            if (overrides.seed)
                c.seed = *overrides.seed;
            if (overrides.trials)
                c.trials = *overrides.trials;
            c.validate();
            sc.series.push_back(std::move(c));
        }
        return sc;
    }

    Scenario load_scenario(const std::string &path, const ScenarioOverrides &overrides)
    {
        std::ifstream in(path);
        if (!in)
            config_error("cannot open scenario file " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str(), overrides);
    }

    ScenarioConfig apply_axis(const ScenarioConfig &cfg, const std::string &axis, double value)
    {
        ScenarioConfig c = cfg;
        if (axis.empty() || axis == "bits")
            return c;
        if (axis == "aperture")
        {
            c.tx = resized(c.tx, element_count_for(value, c.tx.spacing), value);
            c.rx = resized(c.rx, element_count_for(value, c.rx.spacing), value);
        }
        else if (axis == "elements")
        {
            c.tx = resized(c.tx, int(std::lround(value)), c.tx.darisa_aperture_x());
            c.rx = resized(c.rx, int(std::lround(value)), c.rx.darisa_aperture_x());
        }
        else if (axis == "spacing")
        {
            c.tx = resized(c.tx, element_count_for(c.tx.darisa_aperture_x(), value), c.tx.darisa_aperture_x());
            c.rx = resized(c.rx, element_count_for(c.rx.darisa_aperture_x(), value), c.rx.darisa_aperture_x());
        }
        else if (axis == "element_count")
            c.rx = resized(c.rx, int(std::lround(value)), c.rx.darisa_aperture_x());
        else if (axis == "spread")
        {
            for (auto &cl : c.clusters.clusters)
            {
                cl.departure.spread_azimuth = radians(value);
                cl.arrival.spread_azimuth = radians(value);
            }
        }
        else if (axis == "K")
            c.K = int(std::lround(value));
        else
            config_error("unknown sweep axis '" + axis + "'");
        c.validate();
        return c;
    }
}
