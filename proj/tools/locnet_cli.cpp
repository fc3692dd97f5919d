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

#include "locnet/checkpoint.hpp"
#include "locnet/config_io.hpp"
#include "locnet/dataset_io.hpp"
#include "locnet/digest.hpp"
#include "locnet/errors.hpp"
#include "locnet/experiments.hpp"
#include "locnet/nn/gradcheck.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace locnet;

namespace
{
    // Options shared by every subcommand that builds a configuration.
    struct CommonArgs
    {
        std::string config_path;
        bool paper_scale = false;
        std::optional<unsigned> threads;
    };

    struct DatasetArgs
    {
        std::optional<std::string> encoding;
        std::optional<std::size_t> samples;
        std::optional<std::string> variable_trp_plan;
        std::optional<std::string> label_noise_plan;
        std::optional<std::uint64_t> seed;
    };

    struct TrainArgs
    {
        std::optional<int> epochs;
        std::optional<int> batch_size;
        std::optional<double> lr;
        std::optional<int> patience;
        std::optional<std::string> lr_schedule;
        std::string ablate = "none";
    };

    struct Resolved
    {
        ScenarioConfig scenario;
        DatasetRecipe recipe;
        LocNetConfig model;
        TrainConfig train;
        unsigned threads = 1;
        bool paper_scale = false;

        json to_json() const
        {
            return json{{"scale", paper_scale ? "full" : "desk"},
                        {"scenario", locnet::to_json(scenario)},
                        {"dataset", locnet::to_json(recipe)},
                        {"model", locnet::to_json(model)},
                        {"train", locnet::to_json(train)},
                        {"threads", threads}};
        }
    };

    // defaults < config file (--config, else $LOCNET_CONFIG) < flags
    Resolved resolve(const CommonArgs &common)
    {
        json file = json::object();
        std::string path = common.config_path;
        if (path.empty())
            if (const char *env = std::getenv("LOCNET_CONFIG"); env && *env)
                path = env;
        if (!path.empty())
            file = load_json_file(path);
        if (!file.is_object())
            throw FormatError("config " + path + ": top level must be an object");
        for (const auto &[key, value] : file.items())
            if (key != "scale" && key != "scenario" && key != "dataset" && key != "model" && key != "train" &&
                key != "threads")
                throw std::invalid_argument("config " + path + ": unknown key '" + key + "'");

        Resolved r;
        r.paper_scale = common.paper_scale || file.value("scale", std::string("desk")) == "full";
        if (r.paper_scale)
            r.recipe.samples = 80000;
        else
            r.scenario = desk_scale_scenario();
        if (file.contains("scenario"))
            merge_scenario(r.scenario, file["scenario"]);
        if (file.contains("dataset"))
            merge_dataset(r.recipe, file["dataset"]);
        if (file.contains("model"))
            merge_model(r.model, file["model"]);
        if (file.contains("train"))
            merge_train(r.train, file["train"]);
        if (file.contains("threads"))
            r.threads = file["threads"].get<unsigned>();
        if (common.threads)
            r.threads = *common.threads;
        if (r.threads == 0)
            throw std::invalid_argument("--threads must be at least 1");
        return r;
    }

    void apply(Resolved &r, const DatasetArgs &a)
    {
        if (a.encoding)
            r.recipe.encoding = parse_encoding(*a.encoding);
        if (a.samples)
            r.recipe.samples = *a.samples;
        if (a.variable_trp_plan)
            r.recipe.variable_trp_plan = *a.variable_trp_plan;
        if (a.label_noise_plan)
            r.recipe.label_noise_plan = *a.label_noise_plan;
        if (a.seed)
        {
            r.recipe.seed = *a.seed;
            r.scenario.rng_seed = *a.seed;
        }
        r.scenario.validate();
    }

    Ablation apply(Resolved &r, const TrainArgs &a)
    {
        if (a.epochs)
            r.train.epochs = *a.epochs;
        if (a.batch_size)
            r.train.batch_size = *a.batch_size;
        if (a.lr)
            r.train.lr = *a.lr;
        if (a.patience)
            r.train.patience = *a.patience;
        if (a.lr_schedule)
            r.train.lr_schedule = *a.lr_schedule;
        r.train.validate();
        return parse_ablation(a.ablate);
    }

    void add_common(CLI::App *sub, CommonArgs &c)
    {
        sub->add_option("--config", c.config_path, "JSON config file (default: $LOCNET_CONFIG)");
        sub->add_flag("--paper-scale", c.paper_scale, "18 TRPs, 256 taps, 80000 samples instead of the desk layout");
        sub->add_option("--threads", c.threads, "worker threads for dataset generation")->check(CLI::PositiveNumber);
    }

    void add_dataset(CLI::App *sub, DatasetArgs &d)
    {
        sub->add_option("--encoding", d.encoding, "cir | cir-rsrp | cir-rsrp-ratio");
        sub->add_option("--samples", d.samples, "total number of samples");
        sub->add_option("--variable-trp-plan", d.variable_trp_plan, "none | default | N:count,...");
        sub->add_option("--label-noise-plan", d.label_noise_plan, "none | standard | sigma:count,...");
        sub->add_option("--seed", d.seed, "master seed of the dataset");
    }

    void add_train(CLI::App *sub, TrainArgs &t)
    {
        sub->add_option("--epochs", t.epochs);
        sub->add_option("--batch-size", t.batch_size);
        sub->add_option("--lr", t.lr, "Adam learning rate");
        sub->add_option("--patience", t.patience, "early-stopping patience in epochs, 0 disables");
        sub->add_option("--lr-schedule", t.lr_schedule, "constant | cosine");
        sub->add_option("--ablate", t.ablate, "none | attention | dilation | both");
    }

    std::string file_digest(const fs::path &p) { return to_hex(sha256_file(p)); }

    // Run record written next to the outputs once everything else is on disk.
    class Manifest
    {
    public:
        Manifest(std::string command, int argc, char **argv) : start_(std::chrono::steady_clock::now())
        {
            j_["command"] = std::move(command);
            std::string line;
            for (int i = 0; i < argc; ++i)
                line += (i ? " " : "") + std::string(argv[i]);
            j_["command_line"] = line;
            j_["inputs"] = json::object();
            j_["outputs"] = json::object();
        }

        json &operator[](const char *key) { return j_[key]; }
        void input(const fs::path &p) { j_["inputs"][p.string()] = file_digest(p); }
        void output(const fs::path &p) { j_["outputs"][p.string()] = file_digest(p); }

        void write(const fs::path &path)
        {
            j_["duration_s"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            write_file_atomic(path, j_.dump(2) + "\n");
            std::cout << "manifest: " << path.string() << "\n";
        }

    private:
        json j_;
        std::chrono::steady_clock::time_point start_;
    };

    void output_tree(Manifest &m, const fs::path &dir)
    {
        std::vector<fs::path> files;
        for (const auto &e : fs::recursive_directory_iterator(dir))
            if (e.is_regular_file() && e.path().filename() != "manifest.json")
                files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto &f : files)
            m.output(f);
    }

    // ------------------------------------------------------------------ subcommands

    int cmd_gen_scenario(const CommonArgs &common, std::optional<std::uint64_t> seed, const fs::path &out, int argc,
                         char **argv)
    {
        Manifest m("gen-scenario", argc, argv);
        Resolved r = resolve(common);
        if (seed)
            r.scenario.rng_seed = *seed;
        r.scenario.validate();

        json trps = json::array();
        for (const auto &p : build_trp_grid(r.scenario))
            trps.push_back({p.x_m, p.y_m, p.z_m});
        const Hull h = trp_hull(r.scenario);
        const json doc{{"scenario", to_json(r.scenario)},
                       {"scenario_digest", to_hex(scenario_digest(r.scenario))},
                       {"trp_positions_m", trps},
                       {"hull_m", {{"x_min", h.x_min}, {"x_max", h.x_max}, {"y_min", h.y_min}, {"y_max", h.y_max}}},
                       {"los_decay_distance_m", los_decay_distance(r.scenario)}};
        if (out.has_parent_path())
            fs::create_directories(out.parent_path());
        write_file_atomic(out, doc.dump(2) + "\n");
        std::cout << "scenario: " << r.scenario.n_trp << " TRPs, " << r.scenario.cir_taps << " taps -> "
                  << out.string() << "\n";

        m["config"] = r.to_json();
        m["seeds"] = {{"scenario", r.scenario.rng_seed}};
        m.output(out);
        m.write(fs::path(out.string() + ".manifest.json"));
        return 0;
    }

    int cmd_gen_dataset(const CommonArgs &common, const DatasetArgs &dargs, const fs::path &out, int argc,
                        char **argv)
    {
        Manifest m("gen-dataset", argc, argv);
        Resolved r = resolve(common);
        apply(r, dargs);
        const DatasetSpec spec = r.recipe.resolve(r.scenario.n_trp);

        DatasetHeader h;
        h.encoding = spec.encoding;
        h.n_samples = static_cast<std::uint32_t>(spec.total_samples);
        h.dims = encoded_shape(spec.encoding, r.scenario.n_trp, r.scenario.cir_taps);
        h.scenario_digest = scenario_digest(r.scenario);
        h.seed = spec.rng_seed;
        h.scenario = r.scenario;
        h.rsrp = spec.rsrp;

        if (out.has_parent_path())
            fs::create_directories(out.parent_path());
        std::cout << "generating " << spec.total_samples << " " << encoding_name(spec.encoding) << " samples ("
                  << h.dims[0] << "x" << h.dims[1] << "x" << h.dims[2] << ") with " << r.threads << " thread(s)"
                  << std::endl;
        // Streamed so that full-scale datasets never sit in memory as a whole.
        DatasetWriter writer(out, h);
        generate_samples(spec, r.scenario, r.threads, [&](Sample &&s) { writer.write(s); });
        writer.finish();
        std::cout << "dataset: " << out.string() << "\n";

        m["config"] = r.to_json();
        m["seeds"] = {{"dataset", spec.rng_seed}};
        m["threads"] = r.threads;
        m.output(out);
        m.write(fs::path(out.string() + ".manifest.json"));
        return 0;
    }

    int cmd_train(const CommonArgs &common, const TrainArgs &targs, std::optional<std::uint64_t> seed,
                  const fs::path &dataset_path, const fs::path &out_dir, int argc, char **argv)
    {
        Manifest m("train", argc, argv);
        Resolved r = resolve(common);
        const Ablation ablation = apply(r, targs);
        if (seed)
            r.train.seed = *seed;

        const Dataset full = deserialize(dataset_path);
        const DatasetSplit parts = split_dataset(full, r.recipe.split);
        const LocNetConfig cfg = ablated(config_for(r.model, full), ablation);
        LocNet<float> model(cfg, r.train.seed);
        std::cout << "training " << model.param_count() << " parameters (" << encoding_name(full.encoding)
                  << ", ablation " << ablation_name(ablation) << ") on " << parts.train.size() << " samples, "
                  << parts.validation.size() << " validation, " << parts.test.size() << " test" << std::endl;
        const TrainResult result = train(model, parts.train, parts.validation, r.train, &std::cout);
        std::cout << "best epoch " << result.best_epoch << ", validation loss " << result.best_val_loss
                  << (result.stopped_early ? " (stopped early)" : "") << "\n";

        fs::create_directories(out_dir);
        save_checkpoint(model, full.encoding, out_dir / "model.lnwt", to_hex(full.scenario_digest));
        write_history_csv(result.history, out_dir / "history.csv");
        serialize(parts.test, out_dir / "test.lnet");

        m["config"] = r.to_json();
        m["config"].erase("dataset");
        m["config"]["scenario"] = to_json(full.scenario);
        m["config"]["model"] = to_json(cfg);
        m["ablation"] = std::string(ablation_name(ablation));
        m["seeds"] = {{"dataset", full.seed}, {"train", r.train.seed}};
        m["param_count"] = model.param_count();
        m["best_epoch"] = result.best_epoch;
        m.input(dataset_path);
        output_tree(m, out_dir);
        m.write(out_dir / "manifest.json");
        return 0;
    }

    int cmd_eval(const fs::path &checkpoint, const fs::path &dataset_path, const fs::path &out_dir, bool per_trp,
                 bool clean_labels, int argc, char **argv)
    {
        Manifest m("eval", argc, argv);
        LoadedModel loaded = load_checkpoint(checkpoint);
        const DatasetHeader h = read_header(dataset_path);
        if (h.encoding != loaded.encoding)
            throw FormatError("encoding mismatch: checkpoint " + checkpoint.string() + " was trained on " +
                              std::string(encoding_name(loaded.encoding)) + ", dataset " + dataset_path.string() +
                              " is " + std::string(encoding_name(h.encoding)));
        const Shape3 want = loaded.config.input_shape;
        if (h.dims != want)
            throw FormatError("shape mismatch: checkpoint expects " + std::to_string(want[0]) + "x" +
                              std::to_string(want[1]) + "x" + std::to_string(want[2]) + " inputs, dataset has " +
                              std::to_string(h.dims[0]) + "x" + std::to_string(h.dims[1]) + "x" +
                              std::to_string(h.dims[2]));
        if (!loaded.scenario_digest.empty() && loaded.scenario_digest != to_hex(h.scenario_digest))
            std::cerr << "warning: dataset scenario differs from the one the checkpoint was trained on\n";

        const Dataset data = deserialize(dataset_path);
        EvalReport report = evaluate(*loaded.model, data, clean_labels);
        report.dataset_digest = file_digest(dataset_path);
        write_report(report, out_dir, per_trp);
        std::cout << std::setprecision(6) << "n=" << report.n_samples << " p50=" << report.p50_m
                  << " m p90=" << report.p90_m << " m mean=" << report.mean_m << " m"
                  << (clean_labels ? " (clean labels)" : "") << "\n";
        if (per_trp)
            for (const auto &row : report.per_trp)
                std::cout << "  N'=" << row.n_trp << " n=" << row.count << " p90=" << row.p90_m << " m\n";

        m["clean_labels"] = clean_labels;
        m["per_trp"] = per_trp;
        m["seeds"] = {{"dataset", data.seed}};
        m["p90_m"] = report.p90_m;
        m.input(checkpoint);
        m.input(dataset_path);
        output_tree(m, out_dir);
        m.write(out_dir / "manifest.json");
        return 0;
    }

    int cmd_gradcheck(int seeds, const std::string &fault, const std::string &out_csv)
    {
        const auto names = nn::gradcheck_layer_names();
        if (!fault.empty() && std::find(names.begin(), names.end(), fault) == names.end())
            throw std::invalid_argument("--inject-fault: unknown layer '" + fault + "'");
        nn::GradcheckOptions base;
        base.inject_fault = fault;
        std::cout << "precision: double (float64)\nstep h: " << base.h << "\ntolerance: " << base.tolerance
                  << "\nseeds: " << seeds << "\n";
        std::cout << std::left << std::setw(20) << "layer" << std::setw(6) << "seed" << std::setw(14) << "max_rel_err"
                  << std::setw(9) << "checked" << std::setw(9) << "skipped" << "status\n";

        std::ostringstream csv;
        csv << "layer,seed,max_rel_error,checked,skipped,passed\n";
        std::vector<std::string> failed;
        for (int s = 1; s <= seeds; ++s)
        {
            nn::GradcheckOptions opt = base;
            opt.seed = static_cast<std::uint64_t>(s);
            for (const auto &res : nn::run_gradcheck(opt))
            {
                std::cout << std::left << std::setw(20) << res.layer << std::setw(6) << s << std::setw(14)
                          << std::scientific << std::setprecision(3) << res.max_rel_error << std::defaultfloat
                          << std::setw(9) << res.checked << std::setw(9) << res.skipped
                          << (res.passed ? "ok" : "FAIL") << "\n";
                csv << res.layer << ',' << s << ',' << std::setprecision(9) << res.max_rel_error << ','
                    << res.checked << ',' << res.skipped << ',' << (res.passed ? 1 : 0) << '\n';
                if (!res.passed && std::find(failed.begin(), failed.end(), res.layer) == failed.end())
                    failed.push_back(res.layer);
            }
        }
        if (!out_csv.empty())
            write_file_atomic(out_csv, csv.str());
        if (!failed.empty())
        {
            std::string list;
            for (const auto &f : failed)
                list += (list.empty() ? "" : ", ") + f;
            std::cerr << "gradcheck failed: " << list << "\n";
            return 4;
        }
        std::cout << "all layers passed\n";
        return 0;
    }

    ExperimentSettings settings_of(const Resolved &r, Ablation ablation)
    {
        ExperimentSettings s;
        s.scenario = r.scenario;
        s.recipe = r.recipe;
        s.model = r.model;
        s.train = r.train;
        s.ablation = ablation;
        s.threads = r.threads;
        s.log = &std::cout;
        return s;
    }

    void record_runs(Manifest &m, const std::vector<RunOutcome> &runs)
    {
        json results = json::object();
        for (const auto &run : runs)
            results[run.name] = {{"p90_m", run.report.p90_m},
                                 {"best_epoch", run.training.best_epoch},
                                 {"param_count", run.param_count}};
        m["results"] = results;
    }

    int cmd_experiment(const std::string &which, const CommonArgs &common, const DatasetArgs &dargs,
                       const TrainArgs &targs, const std::vector<std::string> &encodings, const fs::path &out_dir,
                       int argc, char **argv)
    {
        Manifest m("experiment-" + which, argc, argv);
        Resolved r = resolve(common);
        apply(r, dargs);
        const Ablation ablation = apply(r, targs);
        if (dargs.seed)
            r.train.seed = *dargs.seed;
        const ExperimentSettings s = settings_of(r, ablation);

        std::vector<Encoding> encs;
        for (const auto &e : encodings)
            encs.push_back(parse_encoding(e));

        std::vector<RunOutcome> runs;
        if (which == "variable-trp")
        {
            if (encs.empty())
                encs = {Encoding::CirRsrp, Encoding::CirRsrpRatio};
            runs = run_variable_trp_experiment(s, encs);
        }
        else if (which == "encodings")
        {
            if (encs.empty())
                encs = {Encoding::Cir, Encoding::CirRsrp};
            runs = run_encoding_comparison(s, encs);
        }
        else
        {
            const LabelNoiseOutcome out = run_label_noise_experiment(s);
            runs = {out.clean, out.noisy};
            m["p90_ratio_noisy_over_clean"] = out.p90_ratio;
            std::cout << "noisy/clean p90 ratio: " << out.p90_ratio << "\n";
        }
        write_outcomes(runs, out_dir);
        std::cout << compare_runs([&] {
            std::vector<NamedReport> named;
            for (const auto &run : runs)
                named.push_back({run.name, run.report});
            return named;
        }());

        m["config"] = r.to_json();
        m["ablation"] = std::string(ablation_name(ablation));
        m["seeds"] = {{"dataset", r.recipe.seed}, {"train", r.train.seed}};
        record_runs(m, runs);
        output_tree(m, out_dir);
        m.write(out_dir / "manifest.json");
        return 0;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"locnet: InF-DH channel simulation, dataset generation and LocNet training"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "locnet 0.1.0");

    CommonArgs common;
    DatasetArgs dargs;
    TrainArgs targs;

    auto *gs = app.add_subcommand("gen-scenario", "write the resolved scenario and TRP layout as JSON");
    add_common(gs, common);
    std::optional<std::uint64_t> gs_seed;
    fs::path gs_out;
    gs->add_option("--seed", gs_seed, "scenario seed");
    gs->add_option("--out", gs_out, "output JSON path")->required();

    auto *gd = app.add_subcommand("gen-dataset", "simulate channels and write a dataset file");
    add_common(gd, common);
    add_dataset(gd, dargs);
    fs::path gd_out;
    gd->add_option("--out", gd_out, "output .lnet path")->required();

    auto *tr = app.add_subcommand("train", "train LocNet on a dataset (seeded train/validation/test split)");
    add_common(tr, common);
    add_train(tr, targs);
    std::optional<std::uint64_t> tr_seed;
    fs::path tr_data, tr_out;
    tr->add_option("--dataset", tr_data, "input .lnet dataset")->required()->check(CLI::ExistingFile);
    tr->add_option("--out-dir", tr_out, "directory for model.lnwt, history.csv, test.lnet")->required();
    tr->add_option("--seed", tr_seed, "initialization, dropout and batch-order seed");

    auto *ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    fs::path ev_ckpt, ev_data, ev_out;
    bool ev_per_trp = false, ev_clean = false;
    ev->add_option("--checkpoint", ev_ckpt)->required()->check(CLI::ExistingFile);
    ev->add_option("--dataset", ev_data)->required()->check(CLI::ExistingFile);
    ev->add_option("--out-dir", ev_out, "directory for cdf.csv, summary.csv, per_trp.csv")->required();
    ev->add_flag("--per-trp", ev_per_trp, "write the per-N' breakdown");
    ev->add_flag("--clean-labels", ev_clean, "measure errors against the labels before noise injection");

    auto *gc = app.add_subcommand("gradcheck", "finite-difference check of every layer in double precision");
    int gc_seeds = 5;
    std::string gc_fault, gc_out;
    gc->add_option("--seeds", gc_seeds, "number of random seeds")->check(CLI::PositiveNumber);
    gc->add_option("--inject-fault", gc_fault, "corrupt this layer's analytic gradient (harness self-test)");
    gc->add_option("--out", gc_out, "also write the table as CSV");

    std::vector<std::string> ex_encodings;
    fs::path ex_out;
    std::vector<std::pair<std::string, CLI::App *>> experiments;
    for (const char *name : {"variable-trp", "label-noise", "encodings"})
    {
        const std::string full = std::string("experiment-") + name;
        const char *help = std::string(name) == "variable-trp" ? "mixed-N' training, per-N' test breakdown"
                           : std::string(name) == "label-noise"
                               ? "clean vs noisy-label training, both tested on clean labels"
                               : "one model per input encoding on the same drops";
        auto *ex = app.add_subcommand(full, help);
        add_common(ex, common);
        add_dataset(ex, dargs);
        add_train(ex, targs);
        if (std::string(name) != "label-noise")
            ex->add_option("--encodings", ex_encodings, "encodings to compare")->delimiter(',');
        ex->add_option("--out-dir", ex_out)->required();
        experiments.emplace_back(name, ex);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (*gs)
            return cmd_gen_scenario(common, gs_seed, gs_out, argc, argv);
        if (*gd)
            return cmd_gen_dataset(common, dargs, gd_out, argc, argv);
        if (*tr)
            return cmd_train(common, targs, tr_seed, tr_data, tr_out, argc, argv);
        if (*ev)
            return cmd_eval(ev_ckpt, ev_data, ev_out, ev_per_trp, ev_clean, argc, argv);
        if (*gc)
            return cmd_gradcheck(gc_seeds, gc_fault, gc_out);
        for (const auto &[name, sub] : experiments)
            if (*sub)
                return cmd_experiment(name, common, dargs, targs, ex_encodings, ex_out, argc, argv);
    }
    catch (const FormatError &e)
    {
        std::cerr << "format error: " << e.what() << "\n";
        return 3;
    }
    catch (const NumericError &e)
    {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
