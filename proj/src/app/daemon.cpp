// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/app/daemon.hpp>
#include <routee/sim/rpc.hpp>
#include <routee/wire/service.hpp>
#include <routee/wire/transport.hpp>

#include <chrono>
#include <filesystem>
#include <thread>

namespace routee::app {
namespace {

class HubHandler final : public wire::ConnectionHandler {
public:
    explicit HubHandler(wire::HubService& svc) : svc_(svc) {}
    std::optional<Bytes> on_frame(ByteView raw) override { return svc_.handle_frame(conn_, raw); }
    bool closed() const override { return conn_.closed; }

private:
    wire::HubService& svc_;
    wire::HubService::Connection conn_;
};

crypto::KeyPair load_or_create_hub_key(const DaemonConfig& cfg, std::ostream& log)
{
    if (std::filesystem::exists(cfg.hub_key_path)) return read_keypair(cfg.hub_key_path);
    crypto::KeyPair key = crypto::KeyPair::generate(crypto::scheme_for(cfg.crypto_mode));
    write_keypair(cfg.hub_key_path, key);
    write_public_key(cfg.hub_key_path + ".pub", key.pub);
    log << "hubd: generated hub key " << cfg.hub_key_path << "\n";
    return key;
}

void wait_for(const std::atomic<bool>& stop)
{
    while (!stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
}

} // namespace

hub::Hub load_or_init_hub(const DaemonConfig& cfg, std::ostream& log)
{
    if (cfg.restore && std::filesystem::exists(cfg.snapshot_path)) {
        log << "hubd: restoring " << cfg.snapshot_path << "\n";
        return hub::Hub::restore(read_file(cfg.snapshot_path));
    }

    const crypto::PublicKey host = read_public_key(cfg.host_key_path);
    std::unique_ptr<wire::FrameChannel> channel;
    try {
        channel = wire::tcp_connect(cfg.simchain.host, cfg.simchain.port);
    } catch (const wire::ProtocolError& e) {
        throw wire::ProtocolError(wire::Status::init_failure, "block source " + cfg.simchain.str() + " unreachable: " + e.what());
    }
    sim::SimClient chain(*channel);
    const sim::TipInfo tip = chain.tip();
    if (cfg.start_height > tip.height)
        throw wire::ProtocolError(wire::Status::init_failure, "start height beyond block source tip");

    std::vector<BlockHeader> headers;
    for (Height h = cfg.start_height; h <= tip.height;) {
        const auto count = static_cast<uint16_t>(std::min<Height>(2016, tip.height - h + 1));
        auto batch = chain.headers(h, count);
        if (batch.empty()) throw wire::ProtocolError(wire::Status::init_failure, "block source returned no headers");
        h += batch.size();
        headers.insert(headers.end(), batch.begin(), batch.end());
    }
    std::vector<Block> fee_blocks;
    const Height first_fee = tip.height >= cfg.fee_window ? std::max(cfg.start_height + 1, tip.height - cfg.fee_window + 1)
                                                          : cfg.start_height + 1;
    for (Height h = first_fee; h <= tip.height; ++h) fee_blocks.push_back(chain.block(h));

    hub::HubConfig hc;
    hc.host_public_key = host;
    hc.host_settle_address = host.address();
    hc.min_routing_fee = cfg.min_routing_fee;
    hc.params = params_by_name(cfg.params);
    hc.fee_window = cfg.fee_window;
    crypto::random_bytes(hc.key_seed);
    const BlockHeader start = headers.front();
    hub::Hub hub = hub::Hub::init(hc, start, cfg.start_height, std::span(headers).subspan(1), fee_blocks);
    log << "hubd: initialised at height " << tip.height << " (" << headers.size() << " headers, " << fee_blocks.size()
        << " fee blocks, fee_avg " << hub.fee_avg() << ")\n";
    return hub;
}

int run_hub_daemon(const DaemonConfig& cfg, const std::atomic<bool>& stop, std::ostream& log, ReadyCallback ready)
{
    try {
        const crypto::KeyPair hub_key = load_or_create_hub_key(cfg, log);
        wire::HubService svc(load_or_init_hub(cfg, log), hub_key);
        auto write_snapshot = [&](const Bytes& snap) { write_file_atomic(cfg.snapshot_path, snap); };
        svc.set_snapshot_sink(write_snapshot);

        wire::FrameServer server(cfg.listen.host, cfg.listen.port, [&svc] { return std::make_unique<HubHandler>(svc); });
        server.start();
        log << "hubd: listening on " << cfg.listen.host << ":" << server.port() << "\n";
        if (ready) ready(server.port());
        wait_for(stop);
        server.stop();
        write_snapshot(svc.with_hub([](const hub::Hub& h) { return h.snapshot(); }));
        log << "hubd: snapshot written to " << cfg.snapshot_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        log << "hubd: error: " << e.what() << "\n";
        return 1;
    }
}

int run_simchain_daemon(const SimchainConfig& cfg, const std::atomic<bool>& stop, std::ostream& log, ReadyCallback ready)
{
    try {
        sim::SimNode node(params_by_name(cfg.params), cfg.seed);
        for (size_t i = 0; i < cfg.premine; ++i) {
            if (cfg.traffic_fee_rate > 0) {
                const Address sink = crypto::KeyPair::from_seed(sim::derive_seed(cfg.seed, "traffic", i)).pub.address();
                node.submit_tx(node.pay_from_miner(sink, 10'000, formula_size(1, 2) * cfg.traffic_fee_rate));
            }
            node.mine_pending();
        }
        sim::SimService svc(node);
        wire::FrameServer server(cfg.listen.host, cfg.listen.port, svc.handler_factory());
        server.start();
        log << "simchain: tip " << node.tip_height() << ", listening on " << cfg.listen.host << ":" << server.port() << "\n";
        if (ready) ready(server.port());
        wait_for(stop);
        server.stop();
        return 0;
    } catch (const std::exception& e) {
        log << "simchain: error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace routee::app
