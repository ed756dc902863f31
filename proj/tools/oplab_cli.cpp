// Copyright 2026 The oplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end over the C API.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oplab/oplab.h"

int main(int argc, char** argv) {
    CLI::App app{"oplab: batch experiments on measures, observables and states"};
    app.set_version_flag("--version", std::string(oplab_version()));
    app.require_subcommand(1);

    std::string config, out = ".", mode;
    std::optional<std::uint64_t> seed;
    const std::vector<std::string> commands = {"simulate", "estimate",   "entropy",  "dissipation", "tomography",
                                               "kolmogorov", "spectral", "validate", "run"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name, name == "run" ? "run the command named by the config's kind" : name + " experiment");
        sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "64-bit seed; overrides OPLAB_SEED and the config");
        sub->add_option("--out", out, "output directory")->capture_default_str();
        sub->add_option("--mode", mode, "arithmetic for measure commands")->check(CLI::IsMember({"rational", "float"}));
    }
    std::vector<std::string> inputs;
    auto* report = app.add_subcommand("report", "consolidate earlier CSV artifacts");
    report->add_option("inputs", inputs, "artifact files or directories")->required();
    report->add_option("--out", out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    int code;
    if (report->parsed()) {
        std::vector<const char*> paths;
        for (const auto& p : inputs) paths.push_back(p.c_str());
        code = oplab_report(paths.data(), paths.size(), out.c_str());
    } else {
        const auto* sub = app.get_subcommands().front();
        std::uint64_t s = seed.value_or(0);
        code = oplab_run_experiment(sub->get_name().c_str(), config.c_str(), out.c_str(), seed ? &s : nullptr,
                                    mode.empty() ? nullptr : mode.c_str());
    }
    if (code != 0) std::cerr << "oplab: " << oplab_last_error() << "\n";
    return code;
}
