// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/app/cli.hpp>
#include <routee/app/config.hpp>
#include <routee/light/light_client.hpp>
#include <routee/sim/rpc.hpp>
#include <routee/wire/client.hpp>
#include <routee/wire/views.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace routee::app {
namespace {

using nlohmann::json;
using wire::ProtocolError;
using wire::Status;

json opt_height(const std::optional<Height>& h) { return h ? json(*h) : json(nullptr); }

json user_json(const hub::UserState& u)
{
    return {{"address", to_hex(u.user_address)},
            {"balance", u.balance},
            {"nonce", u.nonce},
            {"max_source_block", opt_height(u.max_source_block)},
            {"boundary_block", opt_height(u.boundary_block)},
            {"channel", std::string(hub::to_string(u.channel()))},
            {"settle_address", to_hex(u.settle_address)}};
}

json effects_json(const hub::InsertEffects& e)
{
    json credited = json::array();
    for (const auto& c : e.credited)
        credited.push_back({{"beneficiary", to_hex(c.beneficiary)},
                            {"txid", to_hex(c.outpoint.txid)},
                            {"vout", c.outpoint.vout},
                            {"d_amount", c.d_amount},
                            {"b_increase", c.b_increase},
                            {"fare", c.fare}});
    return {{"height", e.height},
            {"fee_avg", e.fee_avg},
            {"credited", credited},
            {"expired", e.expired},
            {"settlement_confirmed", e.settlement_confirmed},
            {"rf_confirmed_gain", e.rf_confirmed_gain},
            {"plan_built", e.plan_built}};
}

json plan_json(const std::optional<wire::PlanSummary>& p)
{
    if (!p) return nullptr;
    return {{"txid", to_hex(p->txid)},  {"selected", p->selected}, {"inputs", p->inputs},
            {"outputs", p->outputs},    {"size", p->size},         {"fee", p->fee},
            {"s_amount", p->s_amount},  {"terminal", p->terminal}, {"built_at", p->built_at}};
}

json ledger_json(const hub::LedgerView& v)
{
    const auto& l = v.ledger;
    return {{"rf_pending", l.rf_pending},
            {"rf_confirmed", l.rf_confirmed},
            {"rf_withdrawn", l.rf_withdrawn},
            {"rf_spent_on_fees", l.rf_spent_on_fees},
            {"rf_inflight", l.rf_inflight},
            {"fee_reserve", l.fee_reserve},
            {"min_routing_fee", l.min_routing_fee},
            {"host_nonce", l.host_nonce},
            {"total_deposited", l.total_deposited},
            {"total_routing_fees", l.total_routing_fees},
            {"total_settled", l.total_settled},
            {"total_host_paid", l.total_host_paid},
            {"total_tx_fees", l.total_tx_fees},
            {"fee_avg", v.fee_avg},
            {"total_balances", v.total_balances},
            {"queued_total", v.queued_total},
            {"users", v.users},
            {"pending_deposits", v.pending_deposits},
            {"owned_deposits", v.owned_deposits},
            {"queue_length", v.queue_length},
            {"confirmed_plans", v.confirmed_plans},
            {"plan_outstanding", v.plan_outstanding},
            {"terminated", v.terminated},
            {"tip_height", v.tip_height}};
}

Address parse_address(const std::string& hex)
{
    try {
        return array_from_hex<20>(hex);
    } catch (const std::exception&) {
        throw ConfigError("invalid address '" + hex + "'");
    }
}

/// Options shared by every command, resolved as flag > environment > config file > default.
struct Globals {
    std::string config_path;
    bool json = false;
    std::string hub, hub_pubkey, simchain, key, host_key, headers_file;
    FlatConfig cfg;

    std::string resolve(const std::string& flag, const std::string& key, const std::string& fallback) const
    {
        if (!flag.empty()) return flag;
        return cfg.get_or(key, fallback);
    }
    Endpoint hub_endpoint() const { return Endpoint::parse(resolve(hub, "hub", "127.0.0.1:7450")); }
    Endpoint simchain_endpoint() const { return Endpoint::parse(resolve(simchain, "simchain", "127.0.0.1:7451")); }
    std::string key_path() const { return resolve(key, "key", "user.key"); }
    std::string host_key_path() const { return resolve(host_key, "host_key", "host.key"); }
    std::string hub_pubkey_path() const { return resolve(hub_pubkey, "hub_pubkey", "hub.key.pub"); }
    std::string headers_path() const { return resolve(headers_file, "headers_file", key_path() + ".headers"); }
};

struct HubConnection {
    std::unique_ptr<wire::FrameChannel> channel;
    std::unique_ptr<wire::HubClient> client;

    explicit HubConnection(const Globals& g)
    {
        const Endpoint ep = g.hub_endpoint();
        channel = wire::tcp_connect(ep.host, ep.port);
        client = std::make_unique<wire::HubClient>(*channel, read_public_key(g.hub_pubkey_path()));
        client->handshake();
    }

    wire::Response call(const wire::Request& r) { return wire::expect_ok(client->call(r)); }

    uint64_t user_nonce(const crypto::KeyPair& key)
    {
        return wire::decode_user(call(wire::make_signed(wire::QueryUser{key.pub.address(), 0}, key)).payload).nonce;
    }

    uint64_t host_nonce() { return ledger().ledger.host_nonce; }

    hub::LedgerView ledger() { return wire::decode_ledger(call(wire::Request{wire::QueryLedger{}, {}}).payload); }

    template <typename Body>
    wire::Response user_call(const crypto::KeyPair& key, Body body)
    {
        body.nonce = user_nonce(key);
        return call(wire::make_signed(std::move(body), key));
    }

    template <typename Body>
    wire::Response host_call(const crypto::KeyPair& key, Body body)
    {
        body.host_nonce = host_nonce();
        return call(wire::make_signed(std::move(body), key));
    }
};

struct SimConnection {
    std::unique_ptr<wire::FrameChannel> channel;
    std::unique_ptr<sim::SimClient> client;

    explicit SimConnection(const Endpoint& ep)
    {
        channel = wire::tcp_connect(ep.host, ep.port);
        client = std::make_unique<sim::SimClient>(*channel);
    }
};

void save_headers(const std::string& path, const HeaderChain& chain)
{
    ByteWriter w;
    for (const BlockHeader& h : chain.headers()) w.raw(serialize_header(h));
    write_file_atomic(path, w.data());
}

HeaderChain load_headers(const std::string& path, const ChainParams& params)
{
    const Bytes raw = read_file(path);
    if (raw.empty() || raw.size() % BlockHeader::kSize != 0) throw ConfigError(path + ": not a header file");
    const ByteView all(raw);
    HeaderChain chain(params, parse_header(all.subspan(0, BlockHeader::kSize)), 0);
    for (size_t off = BlockHeader::kSize; off < raw.size(); off += BlockHeader::kSize)
        chain.append(parse_header(all.subspan(off, BlockHeader::kSize)));
    return chain;
}

void emit(const Globals& g, std::ostream& out, const std::string& command, json result)
{
    if (g.json) {
        json j = {{"ok", true}, {"command", command}};
        j["result"] = std::move(result);
        out << j.dump() << "\n";
        return;
    }
    if (result.is_object()) {
        for (const auto& [k, v] : result.items()) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    } else {
        out << result.dump(2) << "\n";
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"RouTEE hub client"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "Flat key = value config file");
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--hub", g.hub, "Hub daemon endpoint host:port");
    app.add_option("--hub-pubkey", g.hub_pubkey, "Hub static public key file");
    app.add_option("--simchain", g.simchain, "Simchain endpoint host:port");
    app.add_option("--key", g.key, "User key file");
    app.add_option("--host-key", g.host_key, "Host key file");
    app.add_option("--headers-file", g.headers_file, "Light-client header store");

    std::string command;
    std::function<json()> action;
    auto sub = [&](const std::string& name, const std::string& desc) {
        CLI::App* s = app.add_subcommand(name, desc);
        s->callback([&command, name] { command = name; });
        return s;
    };

    // ---- host commands ----
    std::string init_dir = ".", init_params = "simchain", init_crypto = "fast-test", init_listen = "127.0.0.1:7450",
                init_sim = "127.0.0.1:7451";
    Amount init_min_fee = 1;
    bool init_force = false;
    auto* c_init = sub("init", "Create host and hub keys and a daemon config");
    c_init->add_option("--dir", init_dir, "Output directory");
    c_init->add_option("--params", init_params, "Chain parameters: simchain, trivial, mainnet-like");
    c_init->add_option("--crypto", init_crypto, "Signature mode: fast-test or full");
    c_init->add_option("--min-routing-fee", init_min_fee, "Minimum routing fee per payment");
    c_init->add_option("--listen", init_listen, "Daemon listen endpoint");
    c_init->add_option("--block-source", init_sim, "Simchain endpoint for the daemon");
    c_init->add_flag("--force", init_force, "Overwrite existing files");

    std::optional<Height> ins_height;
    bool ins_to_tip = false;
    std::string ins_block_file;
    auto* c_insert = sub("insert-block", "Insert the next (or given) simchain block into the hub");
    c_insert->add_option("--height", ins_height, "Block height to insert");
    c_insert->add_flag("--to-tip", ins_to_tip, "Insert every block up to the simchain tip");
    c_insert->add_option("--block-file", ins_block_file, "Insert a hex-encoded block from a file instead");

    sub("build-settlement", "Ask the hub to build the next settlement transaction");
    uint16_t bc_mine = 0;
    auto* c_broadcast = sub("broadcast", "Submit the outstanding settlement transaction to simchain");
    c_broadcast->add_option("--mine", bc_mine, "Blocks to mine on simchain afterwards");
    sub("terminate", "Terminate the hub and settle every balance");
    sub("snapshot", "Write a hub snapshot");
    sub("ledger", "Show hub ledger totals");
    sub("latest-block", "Show the hub's latest block");
    uint16_t mine_blocks = 1;
    auto* c_mine = sub("mine", "Mine blocks on simchain");
    c_mine->add_option("--blocks", mine_blocks, "Number of blocks");

    // ---- user commands ----
    std::string kg_out, kg_crypto;
    auto* c_keygen = sub("keygen", "Generate a key pair file");
    c_keygen->add_option("--out", kg_out, "Key file to write (defaults to --key)");
    c_keygen->add_option("--crypto", kg_crypto, "Signature mode: fast-test or full");

    std::string au_settle;
    auto* c_add_user = sub("add-user", "Register the key with the hub");
    c_add_user->add_option("--settle-address", au_settle, "On-chain settle address (default: own address)");

    Amount ad_fund = 0, ad_fund_fee = 0;
    uint16_t ad_mine = 0;
    auto* c_add_dep = sub("add-deposit", "Request a deposit address");
    c_add_dep->add_option("--fund", ad_fund, "Pay this amount to the deposit address from the simchain faucet");
    c_add_dep->add_option("--fund-fee", ad_fund_fee, "Fee of the faucet transaction");
    c_add_dep->add_option("--mine", ad_mine, "Blocks to mine on simchain afterwards");

    std::vector<std::string> sy_peers;
    bool sy_trust = false;
    uint16_t sy_batch = 2016;
    auto* c_sync = sub("sync-headers", "Download and verify block headers from peers");
    c_sync->add_option("--peer", sy_peers, "Header peer host:port (repeatable; default: simchain)");
    c_sync->add_flag("--trust-single-peer", sy_trust, "Accept a single peer without cross-checking");
    c_sync->add_option("--batch", sy_batch, "Headers per request");

    std::optional<Height> sb_k, sb_height;
    auto* c_boundary = sub("set-boundary", "Set the boundary block to tip - k of the synced headers");
    c_boundary->add_option("--k", sb_k, "Confirmation depth");
    c_boundary->add_option("--height", sb_height, "Explicit boundary height");

    std::string pay_to, pay_batch;
    Amount pay_amount = 0, pay_fee = 0;
    auto* c_pay = sub("pay", "Pay another hub user");
    c_pay->add_option("--to", pay_to, "Receiver address");
    c_pay->add_option("--amount", pay_amount, "Amount");
    c_pay->add_option("--fee", pay_fee, "Routing fee");
    c_pay->add_option("--batch", pay_batch, "File of '<address> <amount> <fee>' lines sent as one batch");

    Amount st_amount = 0, st_fee = 0;
    auto* c_settle = sub("settle", "Request an on-chain settlement");
    c_settle->add_option("--amount", st_amount, "Amount to receive on chain")->required();
    c_settle->add_option("--fee", st_fee, "Settlement fee")->required();

    sub("balance", "Show the user's hub state");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (!g.config_path.empty()) g.cfg = FlatConfig::load(g.config_path);
        const ChainParams params = params_by_name(g.cfg.get_or("params", "simchain"));
        json result;

        if (command == "init") {
            std::filesystem::create_directories(init_dir);
            const auto path = [&](const char* f) { return (std::filesystem::path(init_dir) / f).string(); };
            for (const char* f : {"host.key", "hub.key", "routee.conf"})
                if (std::filesystem::exists(path(f)) && !init_force) throw ConfigError(path(f) + " exists (use --force)");
            const crypto::CryptoMode mode = crypto::parse_crypto_mode(init_crypto);
            params_by_name(init_params);
            const crypto::KeyPair host = crypto::KeyPair::generate(crypto::scheme_for(mode));
            const crypto::KeyPair hub = crypto::KeyPair::generate(crypto::scheme_for(mode));
            write_keypair(path("host.key"), host);
            write_keypair(path("hub.key"), hub);
            write_public_key(path("hub.key.pub"), hub.pub);
            FlatConfig cfg;
            cfg.set("listen", init_listen);
            cfg.set("hub", init_listen);
            cfg.set("simchain", init_sim);
            cfg.set("params", init_params);
            cfg.set("crypto_mode", init_crypto);
            cfg.set("min_routing_fee", std::to_string(init_min_fee));
            cfg.set("host_key", path("host.key"));
            cfg.set("hub_key", path("hub.key"));
            cfg.set("hub_pubkey", path("hub.key.pub"));
            cfg.set("snapshot", path("routee-hub.snapshot"));
            const std::string text = cfg.dump();
            write_file_atomic(path("routee.conf"), ByteView(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
            result = {{"config", path("routee.conf")},
                      {"host_address", to_hex(host.pub.address())},
                      {"hub_public_key", to_hex(hub.pub.encode())}};
        } else if (command == "insert-block") {
            const crypto::KeyPair host = read_keypair(g.host_key_path());
            HubConnection hub(g);
            std::vector<Block> blocks;
            if (!ins_block_file.empty()) {
                const Bytes raw = read_file(ins_block_file);
                std::string hex(raw.begin(), raw.end());
                while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.back()))) hex.pop_back();
                blocks.push_back(parse_block(from_hex(hex)));
            } else {
                SimConnection sim(g.simchain_endpoint());
                const Height hub_tip = wire::decode_latest(hub.call(wire::Request{wire::QueryLatestBlock{}, {}}).payload).height;
                Height from = ins_height.value_or(hub_tip + 1), to = from;
                if (ins_to_tip) to = sim.client->tip().height;
                for (Height h = from; h <= to; ++h) blocks.push_back(sim.client->block(h));
            }
            json inserted = json::array();
            for (const Block& b : blocks)
                inserted.push_back(effects_json(wire::decode_effects(hub.host_call(host, wire::InsertBlock{0, b}).payload)));
            result = {{"blocks", inserted}};
        } else if (command == "build-settlement") {
            HubConnection hub(g);
            result = {{"plan", plan_json(wire::decode_plan(hub.host_call(read_keypair(g.host_key_path()), wire::BuildSettlement{}).payload))}};
        } else if (command == "broadcast") {
            HubConnection hub(g);
            const auto plan = wire::decode_plan(hub.host_call(read_keypair(g.host_key_path()), wire::GetPlan{}).payload);
            if (!plan) throw ProtocolError(Status::not_yet, "no outstanding settlement");
            SimConnection sim(g.simchain_endpoint());
            const sim::SubmitResult r = sim.client->submit(plan->transaction);
            result = {{"txid", to_hex(plan->txid)}, {"accepted", r.accepted}, {"reason", r.reason}};
            if (bc_mine > 0) result["tip_height"] = sim.client->mine(bc_mine).height;
        } else if (command == "terminate") {
            HubConnection hub(g);
            hub.host_call(read_keypair(g.host_key_path()), wire::Terminate{});
            result = {{"terminated", true}, {"ledger", ledger_json(hub.ledger())}};
        } else if (command == "snapshot") {
            HubConnection hub(g);
            const auto r = wire::decode_receipt(hub.host_call(read_keypair(g.host_key_path()), wire::TakeSnapshot{}).payload);
            result = {{"digest", to_hex(r.digest)}, {"size", r.size}};
        } else if (command == "ledger") {
            HubConnection hub(g);
            result = ledger_json(hub.ledger());
        } else if (command == "latest-block") {
            HubConnection hub(g);
            const auto b = wire::decode_latest(hub.call(wire::Request{wire::QueryLatestBlock{}, {}}).payload);
            result = {{"height", b.height}, {"hash", to_hex(b.hash)}};
        } else if (command == "mine") {
            SimConnection sim(g.simchain_endpoint());
            const sim::TipInfo tip = sim.client->mine(mine_blocks);
            result = {{"tip_height", tip.height}, {"tip_hash", to_hex(tip.hash)}};
        } else if (command == "keygen") {
            const std::string path = kg_out.empty() ? g.key_path() : kg_out;
            const crypto::CryptoMode mode = crypto::parse_crypto_mode(kg_crypto.empty() ? g.cfg.get_or("crypto_mode", "fast-test") : kg_crypto);
            const crypto::KeyPair key = crypto::KeyPair::generate(crypto::scheme_for(mode));
            write_keypair(path, key);
            result = {{"key_file", path}, {"address", to_hex(key.pub.address())}, {"public_key", to_hex(key.pub.encode())}};
        } else if (command == "add-user") {
            const crypto::KeyPair key = read_keypair(g.key_path());
            HubConnection hub(g);
            const Address settle = au_settle.empty() ? key.pub.address() : parse_address(au_settle);
            const Address addr = wire::decode_address(hub.call(wire::Request{wire::AddUser{key.pub, settle}, {}}).payload);
            result = {{"address", to_hex(addr)}, {"settle_address", to_hex(settle)}};
        } else if (command == "add-deposit") {
            const crypto::KeyPair key = read_keypair(g.key_path());
            HubConnection hub(g);
            const Address manager = wire::decode_address(hub.user_call(key, wire::AddDeposit{key.pub.address(), 0}).payload);
            result = {{"deposit_address", to_hex(manager)}};
            if (ad_fund > 0) {
                SimConnection sim(g.simchain_endpoint());
                const sim::SubmitResult r = sim.client->faucet(manager, ad_fund, ad_fund_fee);
                if (!r.accepted) throw ProtocolError(Status::io_error, "faucet payment rejected: " + r.reason);
                result["funding_txid"] = to_hex(r.txid);
                if (ad_mine > 0) result["tip_height"] = sim.client->mine(ad_mine).height;
            }
        } else if (command == "sync-headers") {
            std::vector<std::string> peers = sy_peers;
            if (peers.empty()) peers.push_back(g.simchain_endpoint().str());
            std::vector<std::unique_ptr<wire::FrameChannel>> channels;
            std::vector<std::unique_ptr<sim::RpcSource>> sources;
            for (const std::string& p : peers) {
                const Endpoint ep = Endpoint::parse(p);
                try {
                    channels.push_back(wire::tcp_connect(ep.host, ep.port));
                    sources.push_back(std::make_unique<sim::RpcSource>(*channels.back(), p));
                } catch (const ProtocolError& e) {
                    err << "peer " << p << " unreachable: " << e.what() << "\n";
                }
            }
            if (sources.empty()) throw light::LightClientError("all-peers-unreachable");
            light::ClientConfig lc;
            lc.batch_size = sy_batch;
            lc.trust_single_peer = sy_trust || g.cfg.get_or("trust_single_peer", "false") == "true";
            HeaderChain base;
            const std::string store_path = g.headers_path();
            if (std::filesystem::exists(store_path)) {
                base = load_headers(store_path, params);
            } else {
                std::optional<BlockHeader> genesis;
                for (auto& s : sources) {
                    auto h = s->fetch(0, 1);
                    if (h.size() != 1) throw light::LightClientError("peer " + s->name() + " has no genesis");
                    if (genesis && serialize_header(*genesis) != serialize_header(h[0])) throw light::LightClientError("genesis-mismatch");
                    genesis = h[0];
                }
                base = HeaderChain(params, *genesis, 0);
            }
            std::vector<light::HeaderSource*> ptrs;
            for (auto& s : sources) ptrs.push_back(s.get());
            const light::HeaderStore store = light::sync_headers(ptrs, base, lc);
            save_headers(store_path, store.selected());
            json cand = json::array();
            for (const auto& c : store.candidates)
                cand.push_back({{"peer", c.peer},
                                {"valid", c.chain.has_value()},
                                {"reason", c.dropped_reason},
                                {"tip_height", c.chain ? json(c.chain->tip_height()) : json(nullptr)}});
            result = {{"tip_height", store.selected().tip_height()},
                      {"tip_hash", to_hex(store.selected().tip_hash())},
                      {"selected_peer", store.selected_peer()},
                      {"storage_bytes", store.selected().storage_bytes()},
                      {"peers", cand}};
        } else if (command == "set-boundary") {
            const crypto::KeyPair key = read_keypair(g.key_path());
            const HeaderChain chain = load_headers(g.headers_path(), params);
            light::Boundary b;
            if (sb_height) {
                if (!chain.contains_height(*sb_height)) throw light::LightClientError("height not in synced headers");
                b = {*sb_height, chain.hash_at(*sb_height)};
            } else {
                const Height k = sb_k.value_or(parse_u64(g.cfg.get_or("k_user", "6"), "k_user"));
                b = light::choose_boundary(chain, k);
            }
            HubConnection hub(g);
            const Height set = wire::decode_u64(hub.user_call(key, wire::UpdateBoundary{key.pub.address(), 0, b.height, b.hash}).payload);
            result = {{"boundary_block", set}, {"hash", to_hex(b.hash)}};
        } else if (command == "pay") {
            const crypto::KeyPair key = read_keypair(g.key_path());
            std::vector<wire::PaymentEntry> batch;
            if (!pay_batch.empty()) {
                std::ifstream f(pay_batch);
                if (!f) throw ConfigError("cannot read " + pay_batch);
                std::string addr;
                Amount amount = 0, fee = 0;
                while (f >> addr >> amount >> fee) batch.push_back({parse_address(addr), amount, fee});
                if (!f.eof()) throw ConfigError(pay_batch + ": expected '<address> <amount> <fee>' lines");
            } else {
                if (pay_to.empty()) throw ConfigError("pay needs --to or --batch");
                batch.push_back({parse_address(pay_to), pay_amount, pay_fee});
            }
            HubConnection hub(g);
            const auto r = wire::decode_payment_result(hub.user_call(key, wire::Payment{key.pub.address(), 0, batch}).payload);
            result = {{"accepted", r.accepted}, {"debited", r.debited}, {"routing_fees", r.routing_fees}};
        } else if (command == "settle") {
            const crypto::KeyPair key = read_keypair(g.key_path());
            HubConnection hub(g);
            const uint64_t seq = wire::decode_u64(hub.user_call(key, wire::Settle{key.pub.address(), 0, st_amount, st_fee}).payload);
            result = {{"request_seq", seq}};
        } else if (command == "balance") {
            const crypto::KeyPair key = read_keypair(g.key_path());
            HubConnection hub(g);
            result = user_json(wire::decode_user(hub.call(wire::make_signed(wire::QueryUser{key.pub.address(), 0}, key)).payload));
        }
        emit(g, out, command, std::move(result));
        return 0;
    } catch (const ProtocolError& e) {
        const int code = static_cast<int>(e.status());
        if (g.json) {
            out << json{{"ok", false}, {"command", command}, {"status", std::string(wire::to_string(e.status()))},
                        {"code", code}, {"message", e.what()}}.dump()
                << "\n";
        }
        err << "error: " << wire::to_string(e.status()) << ": " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        if (g.json) out << json{{"ok", false}, {"command", command}, {"status", "local-error"}, {"code", 1}, {"message", e.what()}}.dump() << "\n";
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace routee::app
