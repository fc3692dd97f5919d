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

// Python bindings: dataset generation and loading as NumPy arrays, checkpoint inference,
// evaluation helpers and the gradient check. Configs cross the boundary as JSON text; the
// package wrapper converts dicts.

#include "locnet/channel.hpp"
#include "locnet/checkpoint.hpp"
#include "locnet/config_io.hpp"
#include "locnet/dataset.hpp"
#include "locnet/dataset_io.hpp"
#include "locnet/errors.hpp"
#include "locnet/eval.hpp"
#include "locnet/model.hpp"
#include "locnet/nn/gradcheck.hpp"
#include "locnet/scenario.hpp"
#include "locnet/train.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

namespace py = pybind11;
using namespace locnet;

namespace
{
    ScenarioConfig scenario_from(const std::string &text, bool desk)
    {
        ScenarioConfig c = desk ? desk_scale_scenario() : ScenarioConfig{};
        if (!text.empty())
            merge_scenario(c, json::parse(text));
        c.validate();
        return c;
    }

    py::dict arrays_of(const Dataset &d)
    {
        const std::size_t n = d.size();
        const std::size_t per = static_cast<std::size_t>(d.dims[0]) * d.dims[1] * d.dims[2];
        py::array_t<float> inputs({n, static_cast<std::size_t>(d.dims[0]), static_cast<std::size_t>(d.dims[1]),
                                   static_cast<std::size_t>(d.dims[2])});
        py::array_t<float> labels({n, std::size_t{2}});
        py::array_t<float> clean({n, std::size_t{2}});
        py::array_t<int> avail(static_cast<py::ssize_t>(n));
        py::array_t<float> sigma(static_cast<py::ssize_t>(n));
        float *in = inputs.mutable_data();
        float *lb = labels.mutable_data();
        float *cl = clean.mutable_data();
        int *av = avail.mutable_data();
        float *sg = sigma.mutable_data();
        for (std::size_t i = 0; i < n; ++i)
        {
            const Sample &s = d.samples[i];
            std::memcpy(in + i * per, s.input.values.data(), per * sizeof(float));
            lb[2 * i] = s.label_x;
            lb[2 * i + 1] = s.label_y;
            cl[2 * i] = s.meta.clean_x;
            cl[2 * i + 1] = s.meta.clean_y;
            av[i] = s.meta.n_trp_available;
            sg[i] = s.meta.noise_sigma_m;
        }
        py::dict out;
        out["inputs"] = inputs;
        out["labels"] = labels;
        out["clean_labels"] = clean;
        out["n_trp_available"] = avail;
        out["noise_sigma_m"] = sigma;
        out["encoding"] = std::string(encoding_name(d.encoding));
        out["scenario"] = to_json(d.scenario).dump();
        out["scenario_digest"] = to_hex(d.scenario_digest);
        out["seed"] = d.seed;
        return out;
    }

    py::dict report_dict(const EvalReport &r)
    {
        py::dict out;
        out["p50_m"] = r.p50_m;
        out["p90_m"] = r.p90_m;
        out["mean_m"] = r.mean_m;
        out["n_samples"] = r.n_samples;
        out["errors_m"] = r.errors_m;
        py::list rows;
        for (const auto &row : r.per_trp)
        {
            py::dict d;
            d["n_trp"] = row.n_trp;
            d["count"] = row.count;
            d["p90_m"] = row.p90_m;
            rows.append(d);
        }
        out["per_trp"] = rows;
        return out;
    }
} // namespace

PYBIND11_MODULE(_locnet, m)
{
    m.doc() = "LocNet indoor positioning benchmark (native core)";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def(
        "scenario_json", [](const std::string &overrides, bool desk) { return to_json(scenario_from(overrides, desk)).dump(); },
        py::arg("overrides") = "", py::arg("desk") = true, "Resolved scenario as JSON text.");

    m.def(
        "trp_positions",
        [](const std::string &overrides, bool desk) {
            std::vector<std::array<double, 3>> out;
            for (const auto &p : build_trp_grid(scenario_from(overrides, desk)))
                out.push_back({p.x_m, p.y_m, p.z_m});
            return out;
        },
        py::arg("overrides") = "", py::arg("desk") = true);

    m.def("path_loss_db", &path_loss, py::arg("d_3d_m"), py::arg("f_c_ghz"));
    m.def("path_loss_los_db", &path_loss_los, py::arg("d_3d_m"), py::arg("f_c_ghz"));
    m.def("path_loss_nlos_db", &path_loss_nlos, py::arg("d_3d_m"), py::arg("f_c_ghz"));

    m.def(
        "encoded_shape",
        [](const std::string &encoding, int n_trp, int taps) {
            const Shape3 s = encoded_shape(parse_encoding(encoding), n_trp, taps);
            return py::make_tuple(s[0], s[1], s[2]);
        },
        py::arg("encoding"), py::arg("n_trp"), py::arg("taps"));

    m.def(
        "generate_dataset",
        [](const std::string &scenario, bool desk, const std::string &recipe, unsigned threads) {
            const ScenarioConfig sc = scenario_from(scenario, desk);
            DatasetRecipe r;
            if (!recipe.empty())
                merge_dataset(r, json::parse(recipe));
            Dataset d;
            {
                py::gil_scoped_release release;
                d = build_dataset(r.resolve(sc.n_trp), sc, threads);
            }
            return arrays_of(d);
        },
        py::arg("scenario") = "", py::arg("desk") = true, py::arg("recipe") = "", py::arg("threads") = 1,
        "Simulate a dataset; returns a dict of NumPy arrays and metadata.");

    m.def(
        "load_dataset", [](const std::string &path) { return arrays_of(deserialize(path)); }, py::arg("path"));

    m.def(
        "model_param_count",
        [](const std::string &model) {
            LocNetConfig c;
            if (!model.empty())
                merge_model(c, json::parse(model));
            return param_count(c);
        },
        py::arg("model") = "");

    m.def(
        "predict",
        [](const std::string &checkpoint, const std::string &dataset) {
            LoadedModel lm = load_checkpoint(checkpoint);
            const Dataset d = deserialize(dataset);
            if (d.encoding != lm.encoding)
                throw FormatError("checkpoint expects " + std::string(encoding_name(lm.encoding)) + " inputs, dataset is " +
                                  std::string(encoding_name(d.encoding)));
            std::vector<float> p;
            {
                py::gil_scoped_release release;
                p = predict(*lm.model, d);
            }
            py::array_t<float> out({d.size(), std::size_t{2}});
            std::copy(p.begin(), p.end(), out.mutable_data());
            return out;
        },
        py::arg("checkpoint"), py::arg("dataset"), "Eval-mode (x, y) predictions, shape (n, 2).");

    m.def(
        "evaluate",
        [](const std::string &checkpoint, const std::string &dataset, bool clean_labels) {
            LoadedModel lm = load_checkpoint(checkpoint);
            const Dataset d = deserialize(dataset);
            if (d.encoding != lm.encoding)
                throw FormatError("checkpoint expects " + std::string(encoding_name(lm.encoding)) + " inputs, dataset is " +
                                  std::string(encoding_name(d.encoding)));
            EvalReport r;
            {
                py::gil_scoped_release release;
                r = evaluate(*lm.model, d, clean_labels);
            }
            return report_dict(r);
        },
        py::arg("checkpoint"), py::arg("dataset"), py::arg("clean_labels") = false);

    m.def(
        "percentile", [](std::vector<double> v, double p) { return percentile(std::move(v), p); }, py::arg("errors"),
        py::arg("p"), "Nearest-rank percentile: the ceil(p*n)-th smallest value.");

    m.def(
        "gradcheck",
        [](std::uint64_t seed, const std::string &inject_fault) {
            nn::GradcheckOptions opt;
            opt.seed = seed;
            opt.inject_fault = inject_fault;
            py::list out;
            for (const auto &r : nn::run_gradcheck(opt))
            {
                py::dict d;
                d["layer"] = r.layer;
                d["max_rel_error"] = r.max_rel_error;
                d["checked"] = r.checked;
                d["skipped"] = r.skipped;
                d["passed"] = r.passed;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 1, py::arg("inject_fault") = "");
}
