// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/app/daemon.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace {
std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }
} // namespace

int main(int argc, char** argv)
{
    using namespace routee::app;
    CLI::App app{"Local simulated chain"};
    app.require_subcommand(1);
    auto* serve = app.add_subcommand("serve", "Serve headers, blocks and transaction submission");
    std::string config_path, listen, params;
    std::optional<uint64_t> seed, premine;
    serve->add_option("--config", config_path, "Flat key = value config file");
    serve->add_option("--listen", listen, "host:port to listen on");
    serve->add_option("--seed", seed, "Deterministic chain seed");
    serve->add_option("--params", params, "simchain, trivial or mainnet-like");
    serve->add_option("--premine", premine, "Blocks to mine before serving");
    CLI11_PARSE(app, argc, argv);

    try {
        FlatConfig flat = config_path.empty() ? FlatConfig{} : FlatConfig::load(config_path);
        if (!listen.empty()) flat.set("simchain", listen);
        if (seed) flat.set("seed", std::to_string(*seed));
        if (!params.empty()) flat.set("params", params);
        if (premine) flat.set("premine", std::to_string(*premine));
        const SimchainConfig cfg = SimchainConfig::from(flat);

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        return run_simchain_daemon(cfg, g_stop, std::cerr, [](uint16_t port) {
            std::cout << "listening " << port << std::endl;
        });
    } catch (const std::exception& e) {
        std::cerr << "routee-simchain: " << e.what() << "\n";
        return 1;
    }
}
