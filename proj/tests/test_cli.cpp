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

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace
{
    const fs::path work = fs::temp_directory_path() / "locnet_cli_test";

    int run(const std::string &args, const std::string &log = "cli.log")
    {
        const std::string cmd = std::string("cd '") + work.string() + "' && '" LOCNET_CLI_PATH "' " + args + " > " +
                                log + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    void prepare()
    {
        static bool done = false;
        if (done)
            return;
        fs::remove_all(work);
        fs::create_directories(work);
        std::ofstream(work / "tiny.json") << R"({
  "scale": "desk",
  "scenario": {"cir_taps": 8, "n_subcarriers": 64},
  "dataset": {"samples": 60, "encoding": "cir-rsrp"},
  "model": {"n_residual_blocks": 1, "base_channels": 4, "head_channels": 2, "dropout_rate": 0.0},
  "train": {"epochs": 2, "batch_size": 16, "patience": 0, "log_every": 0}
})";
        done = true;
    }
} // namespace

TEST_CASE("usage errors exit with code 2", "[cli]")
{
    prepare();
    CHECK(run("") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("gen-dataset") == 2); // --out missing
    CHECK(run("train --dataset missing.lnet --out-dir x") == 2);
    CHECK(run("gen-dataset --config tiny.json --encoding rsrp --out a.lnet") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("malformed inputs exit with code 3", "[cli]")
{
    prepare();
    std::ofstream(work / "junk.lnet") << "definitely not a dataset";
    std::ofstream(work / "junk.lnwt") << "nor a checkpoint";
    REQUIRE(run("gen-dataset --config tiny.json --out ok.lnet") == 0);
    CHECK(run("train --config tiny.json --dataset junk.lnet --out-dir t") == 3);
    CHECK(run("eval --checkpoint junk.lnwt --dataset ok.lnet --out-dir e") == 3);
}

TEST_CASE("gradient-check failures exit with code 4 and name the layer", "[cli]")
{
    prepare();
    CHECK(run("gradcheck --seeds 1", "gc_ok.log") == 0);
    CHECK(slurp(work / "gc_ok.log").find("float64") != std::string::npos);
    CHECK(run("gradcheck --seeds 1 --inject-fault dense", "gc_bad.log") == 4);
    const std::string log = slurp(work / "gc_bad.log");
    CHECK(log.find("gradcheck failed") != std::string::npos);
    CHECK(log.find("dense") != std::string::npos);
}

TEST_CASE("an encoding mismatch between checkpoint and dataset is rejected", "[cli]")
{
    prepare();
    REQUIRE(run("gen-dataset --config tiny.json --out m_rsrp.lnet") == 0);
    REQUIRE(run("gen-dataset --config tiny.json --encoding cir --out m_cir.lnet") == 0);
    REQUIRE(run("train --config tiny.json --dataset m_rsrp.lnet --out-dir m_train") == 0);
    CHECK(run("eval --checkpoint m_train/model.lnwt --dataset m_cir.lnet --out-dir m_eval", "mismatch.log") == 3);
    const std::string log = slurp(work / "mismatch.log");
    CHECK(log.find("cir-rsrp") != std::string::npos);
}

TEST_CASE("pipeline reruns are byte-identical", "[cli]")
{
    prepare();
    for (const char *tag : {"a", "b"})
    {
        const std::string t(tag);
        REQUIRE(run("gen-dataset --config tiny.json --seed 4 --out d_" + t + ".lnet") == 0);
        REQUIRE(run("train --config tiny.json --dataset d_" + t + ".lnet --out-dir train_" + t) == 0);
        REQUIRE(run("eval --checkpoint train_" + t + "/model.lnwt --dataset train_" + t +
                    "/test.lnet --per-trp --out-dir eval_" + t) == 0);
    }
    CHECK(slurp(work / "d_a.lnet") == slurp(work / "d_b.lnet"));
    for (const char *f : {"model.lnwt", "history.csv", "test.lnet"})
        CHECK(slurp(work / "train_a" / f) == slurp(work / "train_b" / f));
    for (const char *f : {"cdf.csv", "summary.csv", "per_trp.csv"})
    {
        INFO(f);
        REQUIRE(fs::exists(work / "eval_a" / f));
        CHECK(slurp(work / "eval_a" / f) == slurp(work / "eval_b" / f));
    }
    CHECK(fs::exists(work / "d_a.lnet.manifest.json"));
    CHECK(fs::exists(work / "train_a" / "manifest.json"));
}
