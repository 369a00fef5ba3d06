// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "cli_harness.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>

using namespace routee;
using harness::Harness;

TEST_CASE("endpoint parsing")
{
    const auto e = app::Endpoint::parse("10.0.0.2:7450");
    CHECK(e.host == "10.0.0.2");
    CHECK(e.port == 7450);
    const auto d = app::Endpoint::parse(":9");
    CHECK(d.host == "127.0.0.1");
    CHECK(d.port == 9);
    CHECK(d.str() == "127.0.0.1:9");
    CHECK_THROWS_AS(app::Endpoint::parse("localhost"), app::ConfigError);
    CHECK_THROWS_AS(app::Endpoint::parse("h:70000"), app::ConfigError);
    CHECK_THROWS_AS(app::Endpoint::parse("h:7x"), app::ConfigError);
}

TEST_CASE("flat config with environment override")
{
    const auto cfg = app::FlatConfig::parse("# comment\n listen = 0.0.0.0:1 \n\nmin_routing_fee=5\n");
    CHECK(cfg.get_or("listen", "") == "0.0.0.0:1");
    CHECK(cfg.get_or("missing", "x") == "x");
    CHECK_THROWS_AS(app::FlatConfig::parse("novalue\n"), app::ConfigError);
    CHECK(app::DaemonConfig::from(cfg).min_routing_fee == 5);

    setenv("ROUTEE_MIN_ROUTING_FEE", "9", 1);
    CHECK(app::DaemonConfig::from(cfg).min_routing_fee == 9);
    unsetenv("ROUTEE_MIN_ROUTING_FEE");
    CHECK(app::FlatConfig::parse(cfg.dump()).entries() == cfg.entries());
    CHECK_THROWS_AS(app::params_by_name("regtest"), app::ConfigError);
}

TEST_CASE("key files round trip")
{
    const auto dir = std::filesystem::temp_directory_path() / "routee-keys-test";
    std::filesystem::create_directories(dir);
    const auto key = crypto::KeyPair::generate(crypto::SigScheme::ed25519);
    app::write_keypair((dir / "k").string(), key);
    app::write_public_key((dir / "k.pub").string(), key.pub);
    const auto back = app::read_keypair((dir / "k").string());
    CHECK(back.pub == key.pub);
    CHECK(back.secret == key.secret);
    CHECK(app::read_public_key((dir / "k.pub").string()) == key.pub);
    CHECK_THROWS(app::read_keypair((dir / "absent").string()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli argument errors")
{
    std::ostringstream out, err;
    CHECK(app::run_cli({}, out, err) != 0);
    CHECK(app::run_cli({"no-such-command"}, out, err) != 0);
    CHECK(app::run_cli({"settle", "--amount", "5"}, out, err) != 0);
}

TEST_CASE("two users, one deposit, one gated payment")
{
    const auto w = harness::payment_walkthrough(11);
    for (const auto& p : w.problems) FAIL_CHECK(p);
    CHECK(w.problems.empty());
    CHECK(w.not_ready_code == int(wire::Status::receiver_not_ready));
}

TEST_CASE("cli against running daemons")
{
    Harness h({"trivial", 12, 8, 10, 10});
    auto r = h.cli({"latest-block"});
    REQUIRE(r.code == 0);
    CHECK(r.out["result"]["height"] == 8);
    REQUIRE(h.as("u", {"keygen"}).code == 0);
    REQUIRE(h.as("v", {"keygen"}).code == 0);
    const std::string u = h.as("u", {"add-user"}).out["result"]["address"];
    const std::string v = h.as("v", {"add-user"}).out["result"]["address"];
    CHECK(h.as("u", {"add-user"}).code == int(wire::Status::already_registered));
    REQUIRE(h.as("u", {"add-deposit", "--fund", "500000", "--fund-fee", "2260", "--mine", "10"}).code == 0);
    r = h.cli({"insert-block", "--to-tip"});
    REQUIRE(r.code == 0);
    CHECK(r.out["result"]["blocks"].size() == 10);
    const Amount fee_avg = r.out["result"]["blocks"][0]["fee_avg"];
    CHECK(fee_avg == 10);

    SUBCASE("default boundary is tip minus k")
    {
        REQUIRE(h.as("v", {"sync-headers", "--trust-single-peer"}).code == 0);
        r = h.as("v", {"set-boundary"});
        REQUIRE(r.code == 0);
        CHECK(r.out["result"]["boundary_block"] == 18 - 6);
        CHECK(h.as("v", {"set-boundary", "--k", "2"}).out["result"]["boundary_block"] == 16);
        CHECK(h.as("v", {"set-boundary", "--k", "5"}).code == int(wire::Status::monotonicity_violation));
        CHECK(h.as("v", {"set-boundary", "--k", "40"}).code == 1);
    }
    SUBCASE("a single peer needs the trust flag")
    {
        r = h.as("v", {"sync-headers"});
        CHECK(r.code == 1);
        CHECK(r.out["message"] == "insufficient-peers");
    }
    SUBCASE("payment errors map to exit codes")
    {
        CHECK(h.as("u", {"pay", "--to", v, "--amount", "10", "--fee", "9"}).code == int(wire::Status::fee_below_minimum));
        CHECK(h.as("u", {"pay", "--to", v, "--amount", "10", "--fee", "10"}).code == int(wire::Status::receiver_not_ready));
        CHECK(h.as("u", {"pay"}).code == 1);
        REQUIRE(h.as("v", {"sync-headers", "--trust-single-peer"}).code == 0);
        r = h.as("v", {"set-boundary", "--k", "1"});
        INFO(r.out.dump(), r.err);
        REQUIRE(r.code == 0);
        {
            std::ofstream f(h.path("batch.txt"));
            f << v << " 100 10\n" << v << " 200 10\n";
        }
        r = h.as("u", {"pay", "--batch", h.path("batch.txt")});
        REQUIRE(r.code == 0);
        CHECK(r.out["result"]["debited"] == 320);
        CHECK(h.as("v", {"balance"}).out["result"]["balance"] == 300);
    }
    SUBCASE("settlement fee floor and on-chain settlement")
    {
        CHECK(h.as("u", {"settle", "--amount", "1000", "--fee", std::to_string(34 * fee_avg - 1)}).code ==
              int(wire::Status::fee_too_low));
        REQUIRE(h.as("u", {"settle", "--amount", "100000", "--fee", "4000"}).code == 0);
        r = h.cli({"build-settlement"});
        REQUIRE(r.code == 0);
        REQUIRE(r.out["result"]["plan"].is_object());
        r = h.cli({"broadcast", "--mine", "1"});
        REQUIRE(r.code == 0);
        CHECK(r.out["result"]["accepted"] == true);
        r = h.cli({"insert-block"});
        REQUIRE(r.code == 0);
        CHECK(r.out["result"]["blocks"][0]["settlement_confirmed"] == true);
        CHECK(h.cli({"ledger"}).out["result"]["total_settled"] == 100000);
    }
    SUBCASE("snapshot survives a daemon restart")
    {
        REQUIRE(h.cli({"snapshot"}).code == 0);
        const auto before_ledger = h.cli({"ledger"}).out["result"];
        const auto before_user = h.as("u", {"balance"}).out["result"];
        h.stop_hub();
        CHECK(h.cli({"ledger"}).code == int(wire::Status::io_error));
        h.start_hub(true);
        CHECK(h.cli({"ledger"}).out["result"] == before_ledger);
        CHECK(h.as("u", {"balance"}).out["result"] == before_user);
    }
    SUBCASE("termination settles the balances")
    {
        r = h.cli({"terminate"});
        REQUIRE(r.code == 0);
        CHECK(h.as("u", {"pay", "--to", v, "--amount", "1", "--fee", "10"}).code == int(wire::Status::terminated));
    }
}

TEST_CASE("hub daemon without a reachable block source")
{
    app::FlatConfig cfg;
    const auto dir = std::filesystem::temp_directory_path() / "routee-unreachable-test";
    std::filesystem::create_directories(dir);
    cfg.set("simchain", "127.0.0.1:1");
    cfg.set("listen", "127.0.0.1:0");
    cfg.set("hub_key", (dir / "hub.key").string());
    cfg.set("host_key", (dir / "host.key").string());
    cfg.set("snapshot", (dir / "snap").string());
    std::atomic<bool> stop{false};
    std::ostringstream log;
    bool ready = false;
    CHECK(app::run_hub_daemon(app::DaemonConfig::from(cfg), stop, log, [&](uint16_t) { ready = true; }) == 1);
    CHECK_FALSE(ready);
    CHECK(log.str().find("error") != std::string::npos);
    std::filesystem::remove_all(dir);
}
