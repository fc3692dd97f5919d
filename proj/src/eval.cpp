// SPDX-License-Identifier: Apache-2.0
//
// locnet-bench: deep-learning indoor positioning benchmark for InF-DH scenarios
// Copyright (C) 2026 The locnet-bench Authors
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

#include "locnet/eval.hpp"

#include "locnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace locnet
{
    namespace
    {
        std::string num(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.9g", v);
            return buf;
        }

        std::ofstream open_csv(const std::filesystem::path &p)
        {
            std::ofstream out(p, std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + p.string());
            return out;
        }
    } // namespace

    double horizontal_error(double x_hat, double y_hat, double x, double y)
    {
        return std::hypot(x_hat - x, y_hat - y);
    }

    double percentile(std::vector<double> errors, double p)
    {
        if (errors.empty())
            throw std::invalid_argument("percentile: empty sample");
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("percentile: p must lie in [0, 1]");
        const std::size_t n = errors.size();
        // Guard against p * n landing a hair above an integer through rounding.
        const double rank = std::ceil(p * static_cast<double>(n) - 1e-9);
        const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(rank, 1.0)), 1, n);
        std::nth_element(errors.begin(), errors.begin() + static_cast<std::ptrdiff_t>(k - 1), errors.end());
        return errors[k - 1];
    }

    EvalReport make_report(const std::vector<double> &errors, const std::vector<int> &n_trp_available)
    {
        if (errors.empty())
            throw std::invalid_argument("make_report: no errors");
        if (errors.size() != n_trp_available.size())
            throw std::invalid_argument("make_report: errors and N' lists differ in length");
        EvalReport r;
        r.errors_m = errors;
        std::sort(r.errors_m.begin(), r.errors_m.end());
        r.n_samples = errors.size();
        const double n = static_cast<double>(r.n_samples);
        r.cdf.reserve(r.n_samples);
        for (std::size_t i = 0; i < r.n_samples; ++i)
            r.cdf.push_back({r.errors_m[i], static_cast<double>(i + 1) / n});
        r.p50_m = percentile(r.errors_m, 0.5);
        r.p90_m = percentile(r.errors_m, 0.9);
        r.mean_m = std::accumulate(r.errors_m.begin(), r.errors_m.end(), 0.0) / n;

        std::map<int, std::vector<double>> groups;
        for (std::size_t i = 0; i < errors.size(); ++i)
            groups[n_trp_available[i]].push_back(errors[i]);
        for (auto &[k, v] : groups)
            r.per_trp.push_back({k, v.size(), percentile(v, 0.9)});
        return r;
    }

    EvalReport evaluate(LocNet<float> &model, const Dataset &data, bool clean_labels, int batch_size)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<float> pred = predict(model, data, batch_size);
        std::vector<double> errors(data.size());
        std::vector<int> n_avail(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
        {
            const Sample &s = data.samples[i];
            const double x = clean_labels ? s.meta.clean_x : s.label_x;
            const double y = clean_labels ? s.meta.clean_y : s.label_y;
            errors[i] = horizontal_error(pred[2 * i], pred[2 * i + 1], x, y);
            n_avail[i] = s.meta.n_trp_available;
        }
        EvalReport r = make_report(errors, n_avail);
        r.model_param_count = model.param_count();
        r.seed = data.seed;
        r.encoding = data.encoding;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

    void write_report(const EvalReport &report, const std::filesystem::path &dir, bool per_trp)
    {
        std::filesystem::create_directories(dir);
        {
            auto out = open_csv(dir / "cdf.csv");
            out << "error_m,fraction\n";
            for (const auto &p : report.cdf)
                out << num(p.error_m) << ',' << num(p.fraction) << '\n';
        }
        {
            auto out = open_csv(dir / "summary.csv");
            out << "metric,value\n";
            out << "n_samples," << report.n_samples << '\n';
            out << "p50_m," << num(report.p50_m) << '\n';
            out << "p90_m," << num(report.p90_m) << '\n';
            out << "mean_m," << num(report.mean_m) << '\n';
            out << "max_m," << num(report.errors_m.back()) << '\n';
            out << "model_param_count," << report.model_param_count << '\n';
            out << "encoding," << encoding_name(report.encoding) << '\n';
            out << "dataset_seed," << report.seed << '\n';
            if (!report.dataset_digest.empty())
                out << "dataset_sha256," << report.dataset_digest << '\n';
            out << "percentile_rule," << report.percentile_rule << '\n';
        }
        if (per_trp)
        {
            auto out = open_csv(dir / "per_trp.csv");
            out << "n_trp,p90_m\n";
            for (const auto &row : report.per_trp)
                out << row.n_trp << ',' << num(row.p90_m) << '\n';
        }
    }

    std::string compare_runs(const std::vector<NamedReport> &reports, CompareRows rows)
    {
        if (reports.empty())
            throw std::invalid_argument("compare_runs: no reports");
        std::ostringstream os;
        os << (rows == CompareRows::NTrp ? "n_trp" : "encoding");
        for (const auto &r : reports)
            os << ',' << r.name;
        os << '\n';

        if (rows == CompareRows::NTrp)
        {
            std::set<int> keys;
            for (const auto &r : reports)
                for (const auto &row : r.report.per_trp)
                    keys.insert(row.n_trp);
            for (int k : keys)
            {
                os << k;
                for (const auto &r : reports)
                {
                    os << ',';
                    for (const auto &row : r.report.per_trp)
                        if (row.n_trp == k)
                            os << num(row.p90_m);
                }
                os << '\n';
            }
            os << "all";
            for (const auto &r : reports)
                os << ',' << num(r.report.p90_m);
            os << '\n';
        }
        else
        {
            std::set<std::uint8_t> keys;
            for (const auto &r : reports)
                keys.insert(static_cast<std::uint8_t>(r.report.encoding));
            for (auto k : keys)
            {
                os << encoding_name(static_cast<Encoding>(k));
                for (const auto &r : reports)
                {
                    os << ',';
                    if (static_cast<std::uint8_t>(r.report.encoding) == k)
                        os << num(r.report.p90_m);
                }
                os << '\n';
            }
        }
        return os.str();
    }

} // namespace locnet
