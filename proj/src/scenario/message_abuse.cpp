// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/scenarios.hpp>
#include <routee/scenario/testbed.hpp>

#include <algorithm>

namespace routee::scenario {
namespace {

constexpr size_t kReplays = 100;

struct Wired {
    wire::HubService::Connection conn;
    std::optional<wire::Session> session;
};

Wired connect(wire::HubService& svc, const crypto::PublicKey& hub_key)
{
    Wired w;
    wire::ClientHandshake hs(hub_key);
    auto ack = svc.handle_frame(w.conn, wire::encode_frame(wire::FrameType::handshake_init, hs.init_payload()));
    if (!ack) throw std::runtime_error("no handshake ack");
    w.session.emplace(hs.finish(wire::decode_frame(*ack).payload));
    return w;
}

Bytes seal_frame(Wired& w, const wire::Request& req)
{
    return wire::encode_frame(wire::FrameType::envelope, w.session->seal(wire::encode_request(req)).encode());
}

Testbed funded(uint64_t seed, Amount min_fee, size_t users)
{
    TestbedOptions opts;
    opts.min_routing_fee = min_fee;
    Testbed tb(seed, opts);
    std::vector<const Principal*> ps;
    for (size_t i = 0; i < users; ++i) ps.push_back(&tb.register_user("user" + std::to_string(i)));
    for (const Principal* p : ps) tb.fund(tb.request_deposit(*p), 400'000);
    tb.mine_and_feed();
    for (const Principal* p : ps) wire::expect_ok(tb.set_boundary(*p));
    return tb;
}

} // namespace

ScenarioReport scenario_message_abuse(uint64_t seed)
{
    ScenarioReport rep;
    rep.id = "message-abuse";
    rep.seed = seed;
    std::mt19937_64 rng(seed);

    // 1. Replay one captured payment envelope, on its own session and on fresh ones.
    bool replay_ok = false;
    {
        Testbed tb = funded(seed, 10, 2);
        const Principal& alice = tb.principal("user0");
        const Principal& bob = tb.principal("user1");
        const Amount a0 = tb.user(alice).balance, b0 = tb.user(bob).balance;
        Wired w = connect(tb.service(), tb.hub_static_key().pub);
        const Bytes captured = seal_frame(w, tb.sign(alice, wire::Payment{alice.address, 0, {{bob.address, 30, 10}}}));
        size_t rejected = 0;
        auto first = tb.service().handle_frame(w.conn, captured);
        for (size_t i = 1; i < kReplays / 2; ++i) {
            auto reply = tb.service().handle_frame(w.conn, captured);
            if (!reply || wire::decode_frame(*reply).type == wire::FrameType::error) ++rejected;
        }
        for (size_t i = kReplays / 2; i < kReplays; ++i) {
            Wired attacker = connect(tb.service(), tb.hub_static_key().pub);
            auto reply = tb.service().handle_frame(attacker.conn, captured);
            if (reply && wire::decode_frame(*reply).type == wire::FrameType::error) ++rejected;
        }
        const int64_t bob_delta = static_cast<int64_t>(tb.user(bob).balance) - static_cast<int64_t>(b0);
        const int64_t alice_delta = static_cast<int64_t>(tb.user(alice).balance) - static_cast<int64_t>(a0);
        replay_ok = first.has_value() && bob_delta == 30 && alice_delta == -40 && rejected == kReplays - 1;
        rep.metrics["replay"] = {{"deliveries", kReplays}, {"rejected", rejected}, {"receiver_delta", bob_delta}};
        rep.deltas["replay.sender.hub_balance"] = alice_delta;
        rep.deltas["replay.receiver.hub_balance"] = bob_delta;
        rep.steps.push_back("replayed payment x" + std::to_string(kReplays) + ": receiver credited " + std::to_string(bob_delta));
    }

    // 2. Reordering across sessions, delivered to hubs with the old and a raised minimum fee.
    bool reorder_ok = true;
    {
        size_t accepted_total = 0, below_min_rejected = 0, tamper_rejected = 0;
        const Amount fees[] = {10, 15, 20, 25};
        // Same seed, same users; only the hub's minimum fee differs.
        for (Amount min_fee : {Amount{10}, Amount{20}}) {
            Testbed tb = funded(seed, min_fee, 4);
            std::vector<const Principal*> ps;
            for (size_t i = 0; i < 4; ++i) ps.push_back(&tb.principal("user" + std::to_string(i)));
            std::map<Address, Amount> before;
            for (const Principal* p : ps) before[p->address] = tb.user(*p).balance;

            std::map<Bytes, wire::Payment> signed_payments;
            std::vector<std::pair<size_t, Bytes>> frames;
            std::vector<Wired> wires;
            for (size_t i = 0; i < ps.size(); ++i) {
                wires.push_back(connect(tb.service(), tb.hub_static_key().pub));
                const uint64_t n0 = tb.user(*ps[i]).nonce;
                for (size_t k = 0; k < 3; ++k) {
                    wire::Payment pay{ps[i]->address, n0 + k,
                                      {{ps[(i + 1) % ps.size()]->address, 500 + 10 * k, fees[(i + k) % 4]}}};
                    const wire::Request req = wire::make_signed(pay, ps[i]->key);
                    signed_payments[wire::encode_request(req)] = pay;
                    frames.emplace_back(i, seal_frame(wires[i], req));
                }
            }
            // Interleave sessions at random while keeping each session's own order.
            std::vector<size_t> order;
            for (const auto& f : frames) order.push_back(f.first);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<size_t> cursor(ps.size(), 0);
            std::map<Address, Amount> debited, received;
            tb.service().set_audit([&](const wire::Request& req, const wire::Response& resp) {
                auto it = signed_payments.find(wire::encode_request(req));
                if (it == signed_payments.end()) return;
                const Amount fee = it->second.batch[0].routing_fee;
                if (resp.status == wire::Status::ok) {
                    ++accepted_total;
                    const hub::PaymentResult r = wire::decode_payment_result(resp.payload);
                    const wire::PaymentEntry& e = it->second.batch[0];
                    if (r.routing_fees != fee || r.debited != e.amount + fee) reorder_ok = false;
                    debited[it->second.sender] += r.debited;
                    received[e.receiver] += e.amount;
                } else if (resp.status == wire::Status::fee_below_minimum) {
                    if (fee >= min_fee) reorder_ok = false;
                    ++below_min_rejected;
                }
            });
            for (size_t who : order) {
                size_t seen = 0;
                for (const auto& [owner, frame] : frames) {
                    if (owner != who) continue;
                    if (seen++ == cursor[who]) {
                        tb.service().handle_frame(wires[who].conn, frame);
                        break;
                    }
                }
                ++cursor[who];
            }
            // Balances move by exactly amount + signed fee of what was accepted.
            for (const Principal* p : ps)
                if (tb.user(*p).balance + debited[p->address] != before[p->address] + received[p->address]) reorder_ok = false;
            tb.service().set_audit(nullptr);

            // A relay flipping a byte where the fee sits in the ciphertext only breaks the tag.
            Wired w = connect(tb.service(), tb.hub_static_key().pub);
            const wire::Request req = tb.sign(*ps[0], wire::Payment{ps[0]->address, 0, {{ps[1]->address, 700, 30}}});
            Bytes frame = seal_frame(w, req);
            const Bytes plain = wire::encode_request(req);
            const size_t fee_offset = plain.size() - 8 - 2 - 64;   // routing fee precedes the u16-prefixed signature
            frame[5 + 8 + 8 + 12 + fee_offset] ^= 0x01;
            const Amount rf_before = tb.ledger().ledger.rf_pending;
            auto reply = tb.service().handle_frame(w.conn, frame);
            if (reply && wire::decode_frame(*reply).type == wire::FrameType::error && tb.ledger().ledger.rf_pending == rf_before)
                ++tamper_rejected;
            if (!tb.identity().holds()) reorder_ok = false;
        }
        reorder_ok = reorder_ok && tamper_rejected == 2 && accepted_total > 0 && below_min_rejected > 0;
        rep.metrics["reorder"] = {{"accepted", accepted_total},
                                  {"rejected_below_minimum", below_min_rejected},
                                  {"tampered_fee_rejected", tamper_rejected},
                                  {"accepted_fee_equals_signed", reorder_ok}};
        rep.steps.push_back("reordered payments: " + std::to_string(accepted_total) + " accepted at the signed fee, " +
                            std::to_string(below_min_rejected) + " rejected below minimum");
    }

    // 3. Drop schedule: nothing is lost, nothing applied twice.
    bool drop_ok = false;
    {
        RelayFixture fixture(seed, 3);
        sim::RelaySchedule s;
        s.drop = 0.3;
        s.seed = seed;
        const RelayTrialResult r = fixture.run(s, 6);
        drop_ok = r.double_applied == 0 && r.state_mismatches == 0 && r.leaked_markers == 0 && r.identity_holds;
        rep.metrics["drop"] = {{"operations", r.operations},
                               {"applied", r.applied},
                               {"double_applied", r.double_applied},
                               {"state_mismatches", r.state_mismatches},
                               {"identity_holds", r.identity_holds}};
        rep.steps.push_back("drop schedule: " + std::to_string(r.applied) + "/" + std::to_string(r.operations) +
                            " applied once, conservation " + (r.identity_holds ? "holds" : "broken"));
    }

    rep.verdict = replay_ok && reorder_ok && drop_ok ? Verdict::defended : Verdict::vulnerable;
    return rep;
}

} // namespace routee::scenario
