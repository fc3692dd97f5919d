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

#include "locnet/experiments.hpp"

#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace locnet
{
    DatasetSplit split_dataset(const Dataset &full, const SplitFractions &fractions)
    {
        Rng rng = make_rng(full.seed, stream::split);
        const SplitIndices idx = split(full.size(), fractions, rng);
        return {full.subset(idx.train), full.subset(idx.validation), full.subset(idx.test)};
    }

    RunOutcome train_and_evaluate(const std::string &name, const DatasetSplit &data, const ExperimentSettings &s,
                                  bool clean_test_labels, std::unique_ptr<LocNet<float>> *keep_model)
    {
        const LocNetConfig cfg = ablated(config_for(s.model, data.train), s.ablation);
        auto model = std::make_unique<LocNet<float>>(cfg, s.train.seed);
        if (s.log)
            *s.log << "[" << name << "] training " << model->param_count() << " parameters on " << data.train.size()
                   << " samples (" << data.validation.size() << " validation, " << data.test.size() << " test)"
                   << std::endl;
        RunOutcome out;
        out.name = name;
        out.param_count = model->param_count();
        out.training = train(*model, data.train, data.validation, s.train, s.log);
        out.report = evaluate(*model, data.test, clean_test_labels);
        if (s.log)
        {
            std::ostringstream line;
            line << std::fixed << "[" << name << "] best epoch " << out.training.best_epoch << ", test p90 "
                 << std::setprecision(3) << out.report.p90_m << " m, " << std::setprecision(1)
                 << out.training.seconds << " s\n";
            *s.log << line.str() << std::flush;
        }
        if (keep_model)
            *keep_model = std::move(model);
        return out;
    }

    std::vector<RunOutcome> run_encoding_comparison(const ExperimentSettings &s, const std::vector<Encoding> &encodings)
    {
        std::vector<RunOutcome> runs;
        for (Encoding e : encodings)
        {
            DatasetRecipe r = s.recipe;
            r.encoding = e;
            const Dataset full = build_dataset(r.resolve(s.scenario.n_trp), s.scenario, s.threads);
            runs.push_back(train_and_evaluate(std::string(encoding_name(e)), split_dataset(full, r.split), s));
        }
        return runs;
    }

    std::vector<RunOutcome> run_variable_trp_experiment(const ExperimentSettings &s,
                                                        const std::vector<Encoding> &encodings)
    {
        std::vector<RunOutcome> runs;
        for (Encoding e : encodings)
        {
            DatasetRecipe r = s.recipe;
            r.encoding = e;
            if (r.variable_trp_plan == "none")
                r.variable_trp_plan = "default";
            const Dataset full = build_dataset(r.resolve(s.scenario.n_trp), s.scenario, s.threads);
            runs.push_back(train_and_evaluate(std::string(encoding_name(e)), split_dataset(full, r.split), s));
        }
        return runs;
    }

    double mean_p90_over(const EvalReport &report, int lo, int hi)
    {
        double sum = 0.0;
        int n = 0;
        for (const auto &row : report.per_trp)
            if (row.n_trp >= lo && row.n_trp <= hi)
            {
                sum += row.p90_m;
                ++n;
            }
        if (n == 0)
            throw std::invalid_argument("mean_p90_over: no N' in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                        "]");
        return sum / n;
    }

    LabelNoiseOutcome run_label_noise_experiment(const ExperimentSettings &s)
    {
        LabelNoiseOutcome out;
        DatasetRecipe clean = s.recipe;
        clean.label_noise_plan = "none";
        DatasetRecipe noisy = s.recipe;
        if (noisy.label_noise_plan == "none")
            noisy.label_noise_plan = "standard";

        {
            const Dataset full = build_dataset(clean.resolve(s.scenario.n_trp), s.scenario, s.threads);
            out.clean = train_and_evaluate("clean", split_dataset(full, clean.split), s);
        }
        {
            const Dataset full = build_dataset(noisy.resolve(s.scenario.n_trp), s.scenario, s.threads);
            out.noisy = train_and_evaluate("noisy", split_dataset(full, noisy.split), s, true);
        }
        out.p90_ratio = out.noisy.report.p90_m / out.clean.report.p90_m;
        return out;
    }

    void write_outcomes(const std::vector<RunOutcome> &runs, const std::filesystem::path &dir)
    {
        std::filesystem::create_directories(dir);
        std::vector<NamedReport> named;
        for (const auto &r : runs)
        {
            write_report(r.report, dir / r.name, true);
            write_history_csv(r.training.history, dir / r.name / "history.csv");
            named.push_back({r.name, r.report});
        }
        write_file_atomic(dir / "compare.csv", compare_runs(named, CompareRows::NTrp));
    }

} // namespace locnet
