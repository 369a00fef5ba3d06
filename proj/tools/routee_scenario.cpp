// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/scenarios.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Run a RouTEE attack scenario against simchain"};
    std::string id;
    uint64_t seed = 1;
    bool json = false;
    app.add_option("scenario", id, "Scenario id")->required()->check(CLI::IsMember(routee::scenario::scenario_ids()));
    app.add_option("--seed", seed, "Simulation seed");
    app.add_flag("--json", json, "Machine-readable report");
    CLI11_PARSE(app, argc, argv);

    const routee::scenario::ScenarioReport rep = routee::scenario::run_scenario(id, seed);
    if (json) {
        std::cout << rep.to_json().dump(2) << "\n";
    } else {
        std::cout << rep.id << " seed=" << rep.seed << " verdict=" << to_string(rep.verdict) << "\n";
        for (const std::string& s : rep.steps) std::cout << "  " << s << "\n";
        if (!rep.error.empty()) std::cout << "  error: " << rep.error << "\n";
    }
    return rep.verdict == routee::scenario::Verdict::error ? 1 : 0;
}
