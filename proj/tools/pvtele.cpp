// Copyright 2026 The pvtele Authors
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

// Command-line front end for the scenario runner.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pvtele/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> precision;
    std::optional<int> threads;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--config", f.config, "Scenario JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Optimizer seed (unsigned 64-bit)");
    cmd->add_option("--precision", f.precision, "machine | extended:<bits>");
    cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
}

pvtele::Scenario load(const CommonFlags &f, std::optional<pvtele::Task> task, std::optional<std::string> figure) {
    using namespace pvtele;
    json doc = json::object();
    auto src = std::make_shared<ConfigSource>();
    if (!f.config.empty()) {
        const std::string text = read_text(f.config);
        doc = parse_config_text(f.config, text);
        src = std::make_shared<ConfigSource>(f.config, text);
    } else if (!task) {
        throw ConfigError("run: --config is required");
    }
    Scenario s = parse_scenario(doc, src, task, figure);
    if (f.seed) {
        s.seed = *f.seed;
        s.defaulted.erase("/seed");
    }
    if (f.precision) {
        try {
            s.precision = PrecisionPolicy::parse(*f.precision);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("--precision: ") + e.what());
        }
        s.defaulted.erase("/precision");
    }
    if (f.threads) {
        s.threads = *f.threads;
        s.defaulted.erase("/threads");
    }
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"pvtele: teleportation with photon-varying operations in the characteristic-function picture"};
    app.require_subcommand(1);

    struct Command {
        CLI::App *cmd;
        std::optional<pvtele::Task> task;
        CommonFlags flags;
    };
    std::vector<std::unique_ptr<Command>> commands;
    auto make = [&](const std::string &name, const std::string &help, std::optional<pvtele::Task> task) {
        auto c = std::make_unique<Command>();
        c->cmd = app.add_subcommand(name, help);
        c->task = task;
        add_common(c->cmd, c->flags);
        commands.push_back(std::move(c));
        return commands.back().get();
    };
    using pvtele::Task;
    make("response-ratio", "Response ratio on a radial or plane grid", Task::response_ratio_grid);
    make("fidelity", "Teleportation fidelity for a pure input", Task::fidelity);
    make("optimize", "Optimize a generalized operation (scheme e or g)", Task::optimize);
    make("h-prime", "Response ratio with loss applied after the operation", Task::h_prime_grid);
    make("oracle-validate", "Compare analytic CFs with the truncated Fock computation", Task::oracle_validate);
    Command *fig = make("figure", "Regenerate a figure dataset", Task::figure);
    std::string figure_id;
    fig->cmd->add_option("id", figure_id, "Figure id")->required()->check(CLI::IsMember(pvtele::figure_ids()));
    make("run", "Run the task named in --config", std::nullopt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    for (const auto &c : commands) {
        if (!c->cmd->parsed()) {
            continue;
        }
        try {
            const std::optional<std::string> id =
                c->task == Task::figure ? std::optional<std::string>(figure_id) : std::nullopt;
            const pvtele::Scenario s = load(c->flags, c->task, id);
            const pvtele::RunResult r = pvtele::run_scenario(s, c->flags.out);
            std::cout << r.summary << "\n";
            for (const auto &f : r.files) {
                std::cerr << "wrote " << f << "\n";
            }
            return r.ok ? 0 : kExitNumerical;
        } catch (const pvtele::ConfigError &e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        } catch (const pvtele::NumericalError &e) {
            std::cerr << "numerical error: " << e.what() << "\n";
            return kExitNumerical;
        } catch (const std::domain_error &e) {
            std::cerr << "numerical error: " << e.what() << "\n";
            return kExitNumerical;
        } catch (const std::invalid_argument &e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitNumerical;
        }
    }
    return kExitConfig;
}
