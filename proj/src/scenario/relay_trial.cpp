// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/scenarios.hpp>
#include <routee/scenario/testbed.hpp>

namespace routee::scenario {

RelayFixture::RelayFixture(uint64_t seed, size_t users) : seed_(seed)
{
    if (users < 2) throw std::invalid_argument("relay fixture needs at least two users");
    Testbed tb(seed);
    std::vector<const Principal*> ps;
    for (size_t i = 0; i < users; ++i) ps.push_back(&tb.register_user("user" + std::to_string(i)));
    for (const Principal* p : ps) tb.fund(tb.request_deposit(*p), 500'000);
    tb.mine_and_feed();
    for (const Principal* p : ps) {
        wire::expect_ok(tb.set_boundary(*p));
        users_.push_back(User{p->key, p->address});
    }
    hub_static_ = tb.hub_static_key();
    snapshot_ = tb.service().with_hub([](const hub::Hub& h) { return h.snapshot(); });
}

RelayTrialResult RelayFixture::run(const sim::RelaySchedule& schedule, size_t ops_per_user) const
{
    wire::HubService svc(hub::Hub::restore(snapshot_), hub_static_);
    std::map<Bytes, size_t> accepted;
    svc.set_audit([&](const wire::Request& req, const wire::Response& resp) {
        if (resp.status == wire::Status::ok) ++accepted[wire::encode_request(req)];
    });

    std::map<Address, Amount> start;
    std::map<Address, uint64_t> nonce;
    svc.with_hub([&](const hub::Hub& h) {
        for (const auto& [addr, u] : h.state().users) {
            start[addr] = u.balance;
            nonce[addr] = u.nonce;
        }
        return 0;
    });

    // Every user signs a run of payments to the next user up front.
    struct Op {
        size_t user;
        wire::Request request;
        wire::Payment payment;
    };
    std::vector<Op> ops;
    for (size_t i = 0; i < users_.size(); ++i) {
        const User& u = users_[i];
        for (size_t k = 0; k < ops_per_user; ++k) {
            wire::Payment pay{u.address, nonce[u.address] + k,
                              {wire::PaymentEntry{users_[(i + 1) % users_.size()].address, 1'000 + 17 * k + i, 10 + k}}};
            ops.push_back(Op{i, wire::make_signed(pay, u.key), pay});
        }
    }

    std::vector<Bytes> traffic;
    uint64_t relay_seed = schedule.seed;
    for (int phase = 0; phase < 2; ++phase) {
        for (size_t i = 0; i < users_.size(); ++i) {
            sim::RelaySchedule up_s = schedule, down_s = schedule;
            up_s.seed = relay_seed++;
            down_s.seed = relay_seed++;
            sim::Relay up(up_s), down(down_s), control(sim::RelaySchedule::pass_through());

            // Handshake frames cross an honest relay; the schedule applies to envelopes.
            wire::HubService::Connection conn;
            wire::ClientHandshake hs(hub_static_.pub);
            std::optional<wire::Session> client;
            for (Bytes& f : control.transmit(wire::encode_frame(wire::FrameType::handshake_init, hs.init_payload())))
                if (auto reply = svc.handle_frame(conn, f))
                    for (Bytes& r : control.transmit(*reply)) client.emplace(hs.finish(wire::decode_frame(r).payload));
            traffic.insert(traffic.end(), control.observed().begin(), control.observed().end());
            if (!client) continue;

            auto to_client = [&](std::vector<Bytes> frames) {
                for (Bytes& f : frames) {
                    try {
                        const wire::Frame fr = wire::decode_frame(f);
                        if (fr.type == wire::FrameType::envelope) client->open(wire::Envelope::decode(fr.payload));
                    } catch (const wire::ProtocolError&) {
                        // client-side session abort; later replies are ignored the same way
                    }
                }
            };
            auto to_hub = [&](std::vector<Bytes> frames) {
                for (Bytes& f : frames)
                    if (auto reply = svc.handle_frame(conn, f)) to_client(down.transmit(std::move(*reply)));
            };
            for (const Op& op : ops) {
                if (op.user != i) continue;
                if (client->aborted() || conn.closed) break;   // the second phase resends on a fresh session
                const wire::Envelope env = client->seal(wire::encode_request(op.request));
                to_hub(up.transmit(wire::encode_frame(wire::FrameType::envelope, env.encode())));
            }
            to_hub(up.flush());
            to_client(down.flush());
            traffic.insert(traffic.end(), up.observed().begin(), up.observed().end());
            traffic.insert(traffic.end(), down.observed().begin(), down.observed().end());
        }
    }

    RelayTrialResult res;
    res.operations = ops.size();
    res.frames_observed = traffic.size();
    std::map<Address, int64_t> expected;
    for (const auto& [a, b] : start) expected[a] = static_cast<int64_t>(b);
    for (const Op& op : ops) {
        const Bytes plain = wire::encode_request(op.request);
        auto it = accepted.find(plain);
        const size_t times = it == accepted.end() ? 0 : it->second;
        if (times >= 1) ++res.applied;
        if (times > 1) ++res.double_applied;
        for (size_t t = 0; t < times; ++t) {
            for (const wire::PaymentEntry& e : op.payment.batch) {
                expected[op.payment.sender] -= static_cast<int64_t>(e.amount + e.routing_fee);
                expected[e.receiver] += static_cast<int64_t>(e.amount);
            }
        }
        if (sim::traffic_contains(traffic, plain)) ++res.leaked_markers;
        if (sim::traffic_contains(traffic, wire::signing_bytes(op.request.body))) ++res.leaked_markers;
    }
    for (const User& u : users_)
        if (sim::traffic_contains(traffic, u.address)) ++res.leaked_markers;

    svc.with_hub([&](const hub::Hub& h) {
        for (const auto& [addr, u] : h.state().users)
            if (static_cast<int64_t>(u.balance) != expected[addr]) ++res.state_mismatches;
        res.identity_holds = h.ledger_identity().holds();
        return 0;
    });
    return res;
}

} // namespace routee::scenario
