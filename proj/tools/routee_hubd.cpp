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
    CLI::App app{"RouTEE hub daemon"};
    app.require_subcommand(1);
    auto* serve = app.add_subcommand("serve", "Run the hub and accept client sessions");
    std::string config_path, listen, simchain, snapshot;
    std::optional<uint64_t> min_fee, start_height;
    bool restore = false;
    serve->add_option("--config", config_path, "Flat key = value config file");
    serve->add_option("--listen", listen, "host:port to accept sessions on");
    serve->add_option("--simchain", simchain, "Block source host:port");
    serve->add_option("--snapshot", snapshot, "Snapshot file");
    serve->add_option("--min-routing-fee", min_fee, "Minimum routing fee per payment");
    serve->add_option("--start-height", start_height, "First block the hub tracks");
    serve->add_flag("--restore", restore, "Restore from the snapshot file when present");
    CLI11_PARSE(app, argc, argv);

    try {
        FlatConfig flat = config_path.empty() ? FlatConfig{} : FlatConfig::load(config_path);
        if (!listen.empty()) flat.set("listen", listen);
        if (!simchain.empty()) flat.set("simchain", simchain);
        if (!snapshot.empty()) flat.set("snapshot", snapshot);
        if (min_fee) flat.set("min_routing_fee", std::to_string(*min_fee));
        if (start_height) flat.set("start_height", std::to_string(*start_height));
        if (restore) flat.set("restore", "true");
        const DaemonConfig cfg = DaemonConfig::from(flat);

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        return run_hub_daemon(cfg, g_stop, std::cerr, [](uint16_t port) {
            std::cout << "listening " << port << std::endl;
        });
    } catch (const std::exception& e) {
        std::cerr << "routee-hubd: " << e.what() << "\n";
        return 1;
    }
}
