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

#ifndef LOCNET_EVAL_HPP
#define LOCNET_EVAL_HPP

#include "locnet/dataset.hpp"
#include "locnet/model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace locnet
{
    double horizontal_error(double x_hat, double y_hat, double x, double y);

    // Nearest-rank percentile: the ceil(p n)-th smallest value (1-based, at least the first).
    // p must lie in [0, 1]; throws on an empty sample.
    double percentile(std::vector<double> errors, double p);

    struct CdfPoint
    {
        double error_m;
        double fraction; // i / n at the i-th smallest error
    };

    struct PerTrpRow
    {
        int n_trp;
        std::size_t count;
        double p90_m;
    };

    struct EvalReport
    {
        std::vector<double> errors_m; // ascending
        std::vector<CdfPoint> cdf;
        double p50_m = 0.0;
        double p90_m = 0.0;
        double mean_m = 0.0;
        std::size_t n_samples = 0;
        std::size_t model_param_count = 0;
        std::string dataset_digest;
        std::uint64_t seed = 0;
        Encoding encoding = Encoding::CirRsrp;
        std::vector<PerTrpRow> per_trp; // ascending N'
        double seconds = 0.0;
        std::string percentile_rule = "nearest-rank: ceil(p*n)-th smallest";
    };

    // Report from per-sample errors (any order) and the N' of each sample.
    EvalReport make_report(const std::vector<double> &errors, const std::vector<int> &n_trp_available);

    // Eval-mode predictions over `data`. With `clean_labels` the errors are measured against the
    // labels recorded before noise injection.
    EvalReport evaluate(LocNet<float> &model, const Dataset &data, bool clean_labels = false, int batch_size = 64);

    // cdf.csv, summary.csv and, when `per_trp`, per_trp.csv inside `dir`.
    void write_report(const EvalReport &report, const std::filesystem::path &dir, bool per_trp);

    struct NamedReport
    {
        std::string name;
        EvalReport report;
    };

    enum class CompareRows
    {
        NTrp,    // one row per N' present in any report, plus "all"
        Encoding // one row per encoding present
    };

    // CSV with one p90 column per report; cells are empty where a run has no data for the row.
    std::string compare_runs(const std::vector<NamedReport> &reports, CompareRows rows = CompareRows::NTrp);

} // namespace locnet

#endif
