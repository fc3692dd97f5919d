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

// Acceptance driver. Each criterion prints one PASS/FAIL line; the exit status is non-zero if any
// selected criterion fails. Usage: locnet_acceptance [criterion numbers...] (default: all).

#include "locnet/channel.hpp"
#include "locnet/config_io.hpp"
#include "locnet/dataset.hpp"
#include "locnet/eval.hpp"
#include "locnet/experiments.hpp"
#include "locnet/model.hpp"
#include "locnet/nn/gradcheck.hpp"
#include "locnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using namespace locnet;

namespace
{
    struct Verdict
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(double v, int digits = 4)
    {
        std::ostringstream os;
        os << std::setprecision(digits) << v;
        return os.str();
    }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    const fs::path work_dir = fs::current_path() / "acceptance_out";

    // 1. Every layer and the composed model against central differences.
    Verdict gradients()
    {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        std::string worst_layer;
        std::set<std::string> failed;
        std::size_t layers = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            nn::GradcheckOptions opt;
            opt.h = 1e-5;
            opt.tolerance = 1e-4;
            opt.seed = seed;
            const auto results = nn::run_gradcheck(opt);
            layers = results.size();
            for (const auto &r : results)
            {
                if (!r.passed || r.checked == 0 || !(r.max_rel_error < 1e-4))
                    failed.insert(r.layer);
                if (r.max_rel_error > worst)
                {
                    worst = r.max_rel_error;
                    worst_layer = r.layer;
                }
            }
        }
        const double secs = seconds_since(t0);
        std::string detail = std::to_string(layers) + " checks x 5 seeds, worst rel. error " + fmt(worst) + " (" +
                             worst_layer + "), " + fmt(secs, 3) + " s";
        for (const auto &f : failed)
            detail += ", failed: " + f;
        return {failed.empty() && secs < 120.0, detail};
    }

    // 2. Path loss, RSRP and IFFT energy against independent evaluations.
    Verdict closed_forms()
    {
        double pl_err = 0.0;
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
            {
                const double d = 1.0 + 600.0 * std::pow(i / 9.0, 2.0);
                const double f = 0.5 + 0.75 * j;
                const double nlos_prime = 33.63 + 21.9 * std::log10(d) + 20.0 * std::log10(f);
                const double los = 31.84 + 21.5 * std::log10(d) + 19.0 * std::log10(f);
                pl_err = std::max({pl_err, std::abs(path_loss_los(d, f) - los),
                                   std::abs(path_loss_nlos(d, f) - nlos_prime),
                                   std::abs(path_loss(d, f) - std::max(los, nlos_prime))});
            }

        Rng rng(2024);
        std::normal_distribution<double> g;
        double rsrp_err = 0.0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            CVec cir(static_cast<std::size_t>(4 + trial % 253));
            const double scale = std::pow(10.0, -2.0 - 4.0 * (trial % 7) / 7.0);
            for (auto &v : cir)
                v = cdouble(g(rng), g(rng)) * scale;
            long double acc = 0.0L;
            for (const auto &v : cir)
                acc += static_cast<long double>(v.real()) * v.real() + static_cast<long double>(v.imag()) * v.imag();
            const double oracle = static_cast<double>(acc / static_cast<long double>(cir.size()));
            rsrp_err = std::max(rsrp_err, std::abs(rsrp_linear(cir) - oracle) / oracle);
        }

        ScenarioConfig c;
        double parseval_err = 0.0;
        for (int trial = 0; trial < 50; ++trial)
        {
            const auto profile = draw_multipath(trial % 2 == 0, 5.0 + trial, c, rng);
            const CVec h = freq_response(profile, c, rng);
            const CVec cir = inverse_dft(h);
            double ef = 0.0, et = 0.0;
            for (const auto &v : h)
                ef += std::norm(v);
            for (const auto &v : cir)
                et += std::norm(v);
            ef /= static_cast<double>(h.size());
            parseval_err = std::max(parseval_err, std::abs(et - ef) / ef);
        }
        return {pl_err < 1e-9 && rsrp_err < 1e-12 && parseval_err < 1e-9,
                "path loss max |err| " + fmt(pl_err) + " dB on 100 points, RSRP max rel. err " + fmt(rsrp_err) +
                    ", Parseval max rel. err " + fmt(parseval_err)};
    }

    ScenarioConfig layout(int n_trp, int taps)
    {
        ScenarioConfig c;
        c.n_trp = n_trp;
        c.grid_rows = n_trp >= 6 ? (n_trp % 3 == 0 ? 3 : 2) : 1;
        c.grid_cols = n_trp / c.grid_rows;
        c.cir_taps = taps;
        c.n_subcarriers = std::max(4 * taps, 256);
        return c;
    }

    // 3. Encoder shapes on simulated samples, constant RSRP rows, uniform ratio channel.
    Verdict shapes()
    {
        std::vector<std::string> problems;
        for (auto [n, taps] : {std::pair{18, 256}, std::pair{8, 64}, std::pair{2, 4}})
        {
            const ScenarioConfig c = layout(n, taps);
            const auto un = static_cast<std::uint32_t>(n), ul = static_cast<std::uint32_t>(taps);
            const std::map<Encoding, Shape3> expected{{Encoding::Cir, {un, ul, 2}},
                                                      {Encoding::CirRsrp, {2 * un, ul, 2}},
                                                      {Encoding::CirRsrpRatio, {2 * un, ul, 3}}};
            for (const auto &[e, shape] : expected)
            {
                DatasetSpec spec;
                spec.encoding = e;
                spec.total_samples = 12;
                spec.rng_seed = 7;
                if (n >= 8)
                    spec.variable_trp_plan = {{4, 6}, {n, 6}};
                const Dataset d = build_dataset(spec, c);
                const std::string tag = std::string(encoding_name(e)) + " (" + std::to_string(n) + ", " +
                                        std::to_string(taps) + ")";
                for (const auto &s : d.samples)
                {
                    if (s.input.dims != shape || s.input.values.size() != s.input.size())
                    {
                        problems.push_back(tag + " shape");
                        break;
                    }
                    if (e != Encoding::Cir)
                        for (std::size_t r = 1; r < shape[0]; r += 2)
                        {
                            const float v = s.input.at(r, 0, 0);
                            for (std::size_t k = 0; k < shape[1]; ++k)
                                for (std::size_t ch = 0; ch < 2; ++ch)
                                    if (s.input.at(r, k, ch) != v)
                                        problems.push_back(tag + " RSRP row not constant");
                        }
                    if (e == Encoding::CirRsrpRatio)
                    {
                        const float ratio = static_cast<float>(s.meta.n_trp_available) / static_cast<float>(n);
                        for (std::size_t r = 0; r < shape[0]; ++r)
                            for (std::size_t k = 0; k < shape[1]; ++k)
                                if (s.input.at(r, k, 2) != ratio)
                                    problems.push_back(tag + " ratio channel not uniform");
                    }
                }
            }
        }
        std::sort(problems.begin(), problems.end());
        problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
        std::string detail = "3 layouts x 3 encodings on simulated samples";
        for (const auto &p : problems)
            detail += "; " + p;
        return {problems.empty(), detail};
    }

    // 4. Masking against a sort oracle on the 18-TRP layout.
    Verdict masking()
    {
        const auto t0 = std::chrono::steady_clock::now();
        const ScenarioConfig c = layout(18, 64);
        Rng rng(99);
        std::normal_distribution<double> g;
        const RsrpScaling scaling;
        const float sentinel_input = scaling.apply(rsrp_sentinel_dbm);
        std::size_t checked = 0, bad = 0;
        for (int n_avail = 4; n_avail <= 17; ++n_avail)
            for (int trial = 0; trial < 1000; ++trial)
            {
                std::vector<ChannelRealization> links(18);
                for (auto &l : links)
                {
                    l.cir.resize(64);
                    const double scale = std::pow(10.0, 1.5 * g(rng) - 4.0);
                    for (auto &v : l.cir)
                        v = cdouble(g(rng), g(rng)) * scale;
                    l.rsrp_dbm = rsrp_dbm(l.cir);
                }
                std::vector<std::pair<double, int>> order;
                for (int i = 0; i < 18; ++i)
                    order.push_back({-links[static_cast<std::size_t>(i)].rsrp_dbm, i});
                std::sort(order.begin(), order.end());
                std::set<int> oracle;
                for (int i = 0; i < n_avail; ++i)
                    oracle.insert(order[static_cast<std::size_t>(i)].second);

                const auto masked = mask_trps(links, n_avail);
                const InputTensor t = encode_cir_rsrp(masked, c, scaling);
                bool ok = true;
                for (int i = 0; i < 18; ++i)
                {
                    const auto ui = static_cast<std::size_t>(i);
                    if (oracle.count(i))
                        ok = ok && masked[ui].cir == links[ui].cir && masked[ui].rsrp_dbm == links[ui].rsrp_dbm;
                    else
                    {
                        ok = ok && masked[ui].rsrp_dbm == rsrp_sentinel_dbm;
                        for (const auto &v : masked[ui].cir)
                            ok = ok && v == cdouble(0.0, 0.0);
                        for (std::size_t k = 0; k < 64; ++k)
                            for (std::size_t ch = 0; ch < 2; ++ch)
                                ok = ok && t.at(2 * ui, k, ch) == 0.0f && t.at(2 * ui + 1, k, ch) == sentinel_input;
                    }
                }
                ++checked;
                bad += !ok;
            }
        const double secs = seconds_since(t0);
        return {bad == 0 && secs < 60.0, std::to_string(checked) + " samples over N' = 4..17, " + std::to_string(bad) +
                                              " mismatches, " + fmt(secs, 3) + " s"};
    }

    // 5. Truncated-Gaussian label noise.
    Verdict label_noise()
    {
        const double phi2 = std::exp(-2.0) / std::sqrt(2.0 * std::numbers::pi);
        const double mass = std::erf(2.0 / std::sqrt(2.0));
        const double std_factor = std::sqrt(1.0 - 4.0 * phi2 / mass);
        Rng rng(5);
        bool ok = true;
        std::string detail;
        for (double sigma : {0.1, 0.3, 0.5, 0.7, 1.0})
        {
            double s1 = 0.0, s2 = 0.0;
            bool bounded = true;
            const int n = 1'000'000;
            for (int i = 0; i < n; ++i)
            {
                const double o = truncated_gaussian_offset(sigma, rng);
                bounded = bounded && o >= -2.0 * sigma && o <= 2.0 * sigma;
                s1 += o;
                s2 += o * o;
            }
            const double mean = s1 / n;
            const double sd = std::sqrt(s2 / n - mean * mean);
            const double rel = std::abs(sd / (sigma * std_factor) - 1.0);
            ok = ok && bounded && rel < 0.05;
            detail += (detail.empty() ? "" : ", ") + std::string("sigma ") + fmt(sigma, 2) + ": std " + fmt(sd) +
                      (bounded ? "" : " OUT OF BOUNDS");
        }
        return {ok, detail + " (closed form " + fmt(std_factor) + " sigma)"};
    }

    LocNetConfig desk_model()
    {
        LocNetConfig m;
        merge_model(m, load_json_file(fs::path(LOCNET_SOURCE_DIR) / "configs" / "desk.json").at("model"));
        return m;
    }

    TrainConfig desk_training()
    {
        TrainConfig t;
        merge_train(t, load_json_file(fs::path(LOCNET_SOURCE_DIR) / "configs" / "desk.json").at("train"));
        t.log_every = 10;
        return t;
    }

    // 6. A reduced-width model memorizes 64 samples.
    Verdict memorization()
    {
        const auto t0 = std::chrono::steady_clock::now();
        DatasetSpec spec;
        spec.encoding = Encoding::CirRsrp;
        spec.total_samples = 64;
        spec.rng_seed = 6;
        const Dataset d = build_dataset(spec, desk_scale_scenario());

        LocNetConfig m = desk_model();
        m.dropout_rate = 0.0;
        LocNet<float> model(config_for(m, d), 6);
        TrainConfig t;
        t.epochs = 2000;
        t.batch_size = 16;
        t.lr = 2e-3;
        t.lr_schedule = "cosine";
        t.patience = 0;
        t.log_every = 100;
        t.seed = 6;
        t.stop_at_val_loss = 0.049; // half the mean horizontal error
        const TrainResult r = train(model, d, d, t, &std::cout);
        const EvalReport rep = evaluate(model, d);
        const double secs = seconds_since(t0);
        return {rep.mean_m < 0.1 && secs < 600.0,
                std::to_string(model.param_count()) + " parameters, training-set mean error " + fmt(rep.mean_m) +
                    " m after " + std::to_string(r.history.size()) + " epochs, " + fmt(secs, 3) + " s"};
    }

    // 11. Parameter budget of the default model and the attention ablation.
    Verdict parameters()
    {
        const LocNetConfig c;
        LocNet<float> full(c, 1);
        LocNet<float> no_att(ablated(c, Ablation::Attention), 1);
        const std::size_t n = full.param_count();
        const std::size_t delta = n - no_att.param_count();
        return {n >= 2'500'000 && n <= 3'300'000 && delta == full.attention_param_count() && delta > 0 &&
                    n == param_count(c),
                "default " + std::to_string(n) + " parameters, attention ablation removes " + std::to_string(delta) +
                    " (gate layer " + std::to_string(full.attention_param_count()) + ")"};
    }

    // 12. gen-dataset, train and eval rerun byte for byte.
    int run_cli(const std::string &args, const fs::path &dir)
    {
        const std::string cmd = "cd '" + dir.string() + "' && '" LOCNET_CLI_PATH "' " + args + " >> cli.log 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    // File contents keyed by relative path; manifests lose their wall-clock field.
    std::map<std::string, std::string> outputs(const fs::path &dir)
    {
        std::map<std::string, std::string> out;
        for (const auto &e : fs::recursive_directory_iterator(dir))
        {
            if (!e.is_regular_file() || e.path().filename() == "cli.log")
                continue;
            std::string bytes = slurp(e.path());
            const std::string name = e.path().filename().string();
            if (name.size() >= 13 && name.substr(name.size() - 13) == "manifest.json")
            {
                auto j = json::parse(bytes);
                j.erase("duration_s");
                bytes = j.dump();
            }
            out[fs::relative(e.path(), dir).string()] = std::move(bytes);
        }
        return out;
    }

    Verdict determinism()
    {
        const fs::path root = work_dir / "determinism";
        fs::remove_all(root);
        const std::string cfg = (root / "tiny.json").string();
        fs::create_directories(root);
        std::ofstream(cfg) << R"({
  "scale": "desk",
  "dataset": {"samples": 300, "encoding": "cir-rsrp-ratio", "variable_trp_plan": "default"},
  "model": {"n_residual_blocks": 1, "base_channels": 4, "head_channels": 4},
  "train": {"epochs": 3, "batch_size": 32, "log_every": 0}
})";
        std::vector<std::map<std::string, std::string>> runs;
        for (const char *tag : {"run1", "run2"})
        {
            const fs::path dir = root / tag;
            fs::create_directories(dir);
            const std::string common = "--config '" + cfg + "' --threads 2";
            if (run_cli("gen-dataset " + common + " --seed 12 --out data.lnet", dir) != 0 ||
                run_cli("train " + common + " --dataset data.lnet --seed 12 --out-dir train", dir) != 0 ||
                run_cli("eval --checkpoint train/model.lnwt --dataset train/test.lnet --per-trp --out-dir eval", dir) !=
                    0)
                return {false, std::string("CLI run failed in ") + tag + ", see " + (dir / "cli.log").string()};
            runs.push_back(outputs(dir));
        }
        std::vector<std::string> differ;
        for (const auto &[name, bytes] : runs[0])
        {
            const auto it = runs[1].find(name);
            if (it == runs[1].end() || it->second != bytes)
                differ.push_back(name);
        }
        if (runs[0].size() != runs[1].size())
            differ.push_back("(file sets differ)");
        std::string detail = std::to_string(runs[0].size()) + " output files compared";
        for (const auto &d : differ)
            detail += ", differs: " + d;
        return {differ.empty() && runs[0].size() >= 10, detail};
    }

    // ---- trend experiments: three seeds, majority decides ----

    struct Majority
    {
        int pass = 0, fail = 0;
        std::vector<std::string> notes;

        bool decided() const { return pass >= 2 || fail >= 2; }
        void add(bool ok, const std::string &note)
        {
            ok ? ++pass : ++fail;
            notes.push_back(note + (ok ? " ok" : " no"));
        }
        Verdict verdict() const
        {
            std::string d = std::to_string(pass) + "/" + std::to_string(pass + fail) + " seeds";
            for (const auto &n : notes)
                d += "; " + n;
            return {pass >= 2, d};
        }
    };

    ExperimentSettings trend_settings(const ScenarioConfig &scenario, std::uint64_t seed)
    {
        ExperimentSettings s;
        s.scenario = scenario;
        s.scenario.rng_seed = seed;
        s.recipe.samples = 5000;
        s.recipe.seed = seed;
        s.model = desk_model();
        s.train = desk_training();
        s.train.seed = seed;
        s.log = &std::cout;
        return s;
    }

    RunOutcome run_one(const ExperimentSettings &s, const std::string &name, bool clean_test_labels = false)
    {
        const Dataset full = build_dataset(s.recipe.resolve(s.scenario.n_trp), s.scenario, s.threads);
        RunOutcome r = train_and_evaluate(name, split_dataset(full, s.recipe.split), s, clean_test_labels);
        write_outcomes({r}, work_dir / ("seed" + std::to_string(s.recipe.seed)) / name);
        return r;
    }

    // 7 and 10 on the 8-TRP desk layout; the clean CIR+RSRP run serves both.
    std::map<int, Verdict> input_trends(bool want7, bool want10)
    {
        Majority richness, noise;
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const bool need7 = want7 && !richness.decided();
            const bool need10 = want10 && !noise.decided();
            if (!need7 && !need10)
                break;
            const std::string tag = "seed " + std::to_string(seed);
            ExperimentSettings s = trend_settings(desk_scale_scenario(), seed);
            s.recipe.encoding = Encoding::CirRsrp;
            const RunOutcome rich = run_one(s, "cir-rsrp");
            if (need7)
            {
                ExperimentSettings sc = s;
                sc.recipe.encoding = Encoding::Cir;
                const RunOutcome cir = run_one(sc, "cir");
                richness.add(rich.report.p90_m <= cir.report.p90_m,
                             tag + ": CIR+RSRP " + fmt(rich.report.p90_m) + " m vs CIR " + fmt(cir.report.p90_m) + " m");
            }
            if (need10)
            {
                ExperimentSettings sn = s;
                sn.recipe.label_noise_plan = "standard";
                const RunOutcome noisy = run_one(sn, "noisy-labels", true);
                const double ratio = noisy.report.p90_m / rich.report.p90_m;
                noise.add(ratio <= 2.0, tag + ": noisy " + fmt(noisy.report.p90_m) + " m vs clean " +
                                            fmt(rich.report.p90_m) + " m (x" + fmt(ratio, 3) + ")");
            }
        }
        std::map<int, Verdict> out;
        if (want7)
            out[7] = richness.verdict();
        if (want10)
            out[10] = noise.verdict();
        return out;
    }

    // 8 and 9 on the 18-TRP layout with 64 taps (N' = 12 needs more than the 8 desk TRPs).
    std::map<int, Verdict> trp_trends(bool want8, bool want9)
    {
        ScenarioConfig scenario;
        scenario.cir_taps = 64;
        Majority mono, ratio_gain;
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const bool need8 = want8 && !mono.decided();
            const bool need9 = want9 && !ratio_gain.decided();
            if (!need8 && !need9)
                break;
            const std::string tag = "seed " + std::to_string(seed);
            ExperimentSettings s = trend_settings(scenario, seed);
            s.recipe.variable_trp_plan = "default";
            s.recipe.encoding = Encoding::CirRsrp;
            const RunOutcome rich = run_one(s, "variable-cir-rsrp");
            auto p90_at = [](const EvalReport &r, int n) {
                for (const auto &row : r.per_trp)
                    if (row.n_trp == n)
                        return row.p90_m;
                throw std::runtime_error("no test samples at N' = " + std::to_string(n));
            };
            if (need8)
            {
                const double p12 = p90_at(rich.report, 12), p4 = p90_at(rich.report, 4);
                mono.add(p12 <= p4, tag + ": N'=12 " + fmt(p12) + " m vs N'=4 " + fmt(p4) + " m");
            }
            if (need9)
            {
                ExperimentSettings sr = s;
                sr.recipe.encoding = Encoding::CirRsrpRatio;
                const RunOutcome with_ratio = run_one(sr, "variable-cir-rsrp-ratio");
                const double a = mean_p90_over(with_ratio.report, 4, 8), b = mean_p90_over(rich.report, 4, 8);
                ratio_gain.add(a <= b, tag + ": mean p90 over N'=4..8 with ratio " + fmt(a) + " m vs without " +
                                           fmt(b) + " m");
            }
        }
        std::map<int, Verdict> out;
        if (want8)
            out[8] = mono.verdict();
        if (want9)
            out[9] = ratio_gain.verdict();
        return out;
    }

    const std::map<int, std::string> titles{
        {1, "gradient correctness"},
        {2, "closed-form oracles"},
        {3, "encoder shape conformance"},
        {4, "masking protocol"},
        {5, "label-noise bounds"},
        {6, "memorization"},
        {7, "trend: CIR+RSRP beats CIR"},
        {8, "trend: p90 at N'=12 <= N'=4"},
        {9, "trend: TRP-ratio channel helps at low N'"},
        {10, "label-noise robustness"},
        {11, "parameter budget"},
        {12, "determinism"},
    };
} // namespace

int main(int argc, char **argv)
{
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i)
    {
        const int c = std::atoi(argv[i]);
        if (!titles.count(c))
        {
            std::cerr << "unknown criterion '" << argv[i] << "' (expected 1..12)\n";
            return 2;
        }
        wanted.insert(c);
    }
    if (wanted.empty())
        for (const auto &[c, _] : titles)
            wanted.insert(c);

    fs::create_directories(work_dir);
    const std::map<int, std::function<Verdict()>> single{
        {1, gradients}, {2, closed_forms}, {3, shapes},     {4, masking},
        {5, label_noise}, {6, memorization}, {11, parameters}, {12, determinism},
    };

    std::map<int, Verdict> verdicts;
    auto guarded = [&](const std::vector<int> &ids, const std::function<std::map<int, Verdict>()> &fn) {
        const auto t0 = std::chrono::steady_clock::now();
        std::map<int, Verdict> got;
        try
        {
            got = fn();
        }
        catch (const std::exception &e)
        {
            for (int id : ids)
                if (wanted.count(id))
                    got[id] = {false, std::string("error: ") + e.what()};
        }
        const double secs = seconds_since(t0);
        for (auto &[id, v] : got)
        {
            verdicts[id] = v;
            std::cout << "criterion " << std::setw(2) << id << " " << (v.pass ? "PASS" : "FAIL") << "  "
                      << titles.at(id) << ": " << v.detail << " [" << fmt(secs, 4) << " s]" << std::endl;
        }
    };

    for (int id : wanted)
        if (single.count(id))
            guarded({id}, [&] { return std::map<int, Verdict>{{id, single.at(id)()}}; });
    if (wanted.count(7) || wanted.count(10))
        guarded({7, 10}, [&] { return input_trends(wanted.count(7) > 0, wanted.count(10) > 0); });
    if (wanted.count(8) || wanted.count(9))
        guarded({8, 9}, [&] { return trp_trends(wanted.count(8) > 0, wanted.count(9) > 0); });

    std::cout << "\nsummary\n";
    int failed = 0;
    for (const auto &[id, v] : verdicts)
    {
        std::cout << "criterion " << std::setw(2) << id << " " << (v.pass ? "PASS" : "FAIL") << "  " << titles.at(id)
                  << "\n";
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
