// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

// In-process simchain + hub daemons driven through run_cli.

#include <routee/app/cli.hpp>
#include <routee/app/config.hpp>
#include <routee/app/daemon.hpp>
#include <routee/wire/messages.hpp>

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <map>
#include <filesystem>
#include <future>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

namespace routee::harness {

struct CliResult {
    int code = 0;
    nlohmann::json out;
    std::string err;
};

class Daemon {
public:
    template <typename Run>
    explicit Daemon(Run run)
    {
        auto ready = std::make_shared<std::promise<uint16_t>>();
        auto done = std::make_shared<std::atomic<bool>>(false);
        thread_ = std::thread([this, run, ready, done] {
            bool fired = false;
            run(stop_, log_, [&](uint16_t port) {
                fired = true;
                ready->set_value(port);
            });
            if (!fired) ready->set_value(0);
        });
        port_ = ready->get_future().get();
    }
    ~Daemon() { shutdown(); }
    Daemon(const Daemon&) = delete;
    Daemon& operator=(const Daemon&) = delete;

    void shutdown()
    {
        stop_ = true;
        if (thread_.joinable()) thread_.join();
    }
    uint16_t port() const { return port_; }
    bool running() const { return port_ != 0; }
    std::string log() const { return log_.str(); }

private:
    std::atomic<bool> stop_{false};
    std::ostringstream log_;
    std::thread thread_;
    uint16_t port_ = 0;
};

class Harness {
public:
    struct Options {
        std::string params = "trivial";
        uint64_t seed = 1;
        size_t premine = 0;
        Amount traffic_fee_rate = 0;
        Amount min_routing_fee = 1;
    };

    explicit Harness(Options opt) : opt_(opt)
    {
        std::random_device rd;
        dir_ = std::filesystem::temp_directory_path() / ("routee-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(dir_);
        app::SimchainConfig sc;
        sc.listen = app::Endpoint{"127.0.0.1", 0};
        sc.seed = opt.seed;
        sc.params = opt.params;
        sc.premine = opt.premine;
        sc.traffic_fee_rate = opt.traffic_fee_rate;
        sim_ = std::make_unique<Daemon>([sc](const std::atomic<bool>& stop, std::ostream& log, app::ReadyCallback cb) {
            return app::run_simchain_daemon(sc, stop, log, cb);
        });
        const CliResult init = cli({"init", "--dir", dir_.string(), "--params", opt.params, "--min-routing-fee",
                                    std::to_string(opt.min_routing_fee), "--block-source", sim_endpoint()});
        if (init.code != 0) throw std::runtime_error("init failed: " + init.err);
        start_hub(false);
    }
    ~Harness()
    {
        hub_.reset();
        sim_.reset();
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }

    void start_hub(bool restore)
    {
        app::FlatConfig cfg = app::FlatConfig::load(config());
        cfg.set("listen", "127.0.0.1:0");
        cfg.set("simchain", sim_endpoint());
        if (restore) cfg.set("restore", "true");
        const app::DaemonConfig dc = app::DaemonConfig::from(cfg);
        hub_ = std::make_unique<Daemon>([dc](const std::atomic<bool>& stop, std::ostream& log, app::ReadyCallback cb) {
            return app::run_hub_daemon(dc, stop, log, cb);
        });
        if (!hub_->running()) throw std::runtime_error("hub daemon failed: " + hub_->log());
    }
    void stop_hub() { hub_.reset(); }

    std::string sim_endpoint() const { return "127.0.0.1:" + std::to_string(sim_->port()); }
    std::string hub_endpoint() const { return "127.0.0.1:" + std::to_string(hub_->port()); }
    std::string config() const { return (dir_ / "routee.conf").string(); }
    std::string path(const std::string& f) const { return (dir_ / f).string(); }
    const std::filesystem::path& dir() const { return dir_; }

    /// Runs the CLI with --json; connection globals are filled in once the daemons run.
    CliResult cli(std::vector<std::string> args) const
    {
        std::vector<std::string> full{"--json"};
        if (sim_) full.insert(full.end(), {"--simchain", sim_endpoint()});
        if (hub_) full.insert(full.end(), {"--config", config(), "--hub", hub_endpoint()});
        full.insert(full.end(), args.begin(), args.end());
        std::ostringstream out, err;
        CliResult r;
        r.code = app::run_cli(full, out, err);
        r.err = err.str();
        try {
            r.out = nlohmann::json::parse(out.str());
        } catch (const std::exception&) {
            r.out = out.str();
        }
        return r;
    }

    /// CLI as user `name` (key file and header store under the work directory).
    CliResult as(const std::string& name, std::vector<std::string> args) const
    {
        std::vector<std::string> full{"--key", path(name + ".key")};
        full.insert(full.end(), args.begin(), args.end());
        return cli(full);
    }

private:
    Options opt_;
    std::filesystem::path dir_;
    std::unique_ptr<Daemon> sim_;
    std::unique_ptr<Daemon> hub_;
};

struct WalkthroughOutcome {
    std::vector<std::string> problems;
    double seconds = 0;
    int not_ready_code = -1;
    nlohmann::json alice, bob, ledger;
};

/// Two users, one deposit and one gated payment, driven step by step through the CLI.
inline WalkthroughOutcome payment_walkthrough(uint64_t seed)
{
    using nlohmann::json;
    WalkthroughOutcome w;
    const auto t0 = std::chrono::steady_clock::now();
    Harness h({"trivial", seed, 0, 0, 1});
    auto step = [&](const char* what, const CliResult& r) {
        if (r.code != 0) w.problems.push_back(std::string(what) + ": exit " + std::to_string(r.code) + " " + r.err);
        return r.code == 0 && r.out.is_object() ? r.out["result"] : json();
    };
    auto expect = [&](const char* what, bool cond) {
        if (!cond) w.problems.push_back(std::string("expected ") + what);
    };
    std::map<std::string, std::string> addr;
    for (const char* n : {"alice", "bob"}) {
        step("keygen", h.as(n, {"keygen"}));
        addr[n] = step("add-user", h.as(n, {"add-user"})).value("address", "");
    }
    auto insert_next = [&](Height expect_height) {
        const json r = step("insert-block", h.cli({"insert-block"}));
        return r.is_object() && r["blocks"].size() == 1 && r["blocks"][0]["height"] == expect_height ? r["blocks"][0] : json();
    };
    auto boundary = [&](const char* who, Height height) {
        step("sync-headers", h.as(who, {"sync-headers", "--trust-single-peer"}));
        const json r = step("set-boundary", h.as(who, {"set-boundary", "--height", std::to_string(height)}));
        expect("boundary update", r.is_object() && r["boundary_block"] == height);
    };

    step("mine", h.cli({"mine", "--blocks", "1"}));
    insert_next(1);
    boundary("bob", 1);
    step("mine", h.cli({"mine", "--blocks", "1"}));
    insert_next(2);
    const json dep = step("add-deposit", h.as("alice", {"add-deposit", "--fund", "238", "--fund-fee", "0", "--mine", "1"}));
    expect("deposit mined in block 3", dep.is_object() && dep["tip_height"] == 3);
    const json b3 = insert_next(3);
    expect("deposit credited with balance increase 90",
           b3.is_object() && b3["credited"].size() == 1 && b3["credited"][0]["b_increase"] == 90 && b3["fee_avg"] == 1);
    boundary("alice", 3);

    const CliResult early = h.as("alice", {"pay", "--to", addr["bob"], "--amount", "30", "--fee", "2"});
    w.not_ready_code = early.code;
    expect("receiver-not-ready before the boundary advances",
           early.code == int(wire::Status::receiver_not_ready) && early.out.is_object() && early.out["status"] == "receiver-not-ready");

    step("mine", h.cli({"mine", "--blocks", "1"}));
    insert_next(4);
    boundary("bob", 4);
    const json paid = step("pay", h.as("alice", {"pay", "--to", addr["bob"], "--amount", "30", "--fee", "2"}));
    expect("payment accepted", paid.is_object() && paid["accepted"] == 1);

    w.alice = step("balance", h.as("alice", {"balance"}));
    w.bob = step("balance", h.as("bob", {"balance"}));
    w.ledger = step("ledger", h.cli({"ledger"}));
    expect("alice balance 58", w.alice.is_object() && w.alice["balance"] == 58);
    expect("bob balance 30", w.bob.is_object() && w.bob["balance"] == 30);
    expect("bob max source 3", w.bob.is_object() && w.bob["max_source_block"] == 3);
    expect("bob boundary 4", w.bob.is_object() && w.bob["boundary_block"] == 4);
    expect("rf_pending 2", w.ledger.is_object() && w.ledger["rf_pending"] == 2);
    w.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return w;
}

} // namespace routee::harness
