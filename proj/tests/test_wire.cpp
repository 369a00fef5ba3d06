// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/scenario/testbed.hpp>
#include <routee/sim/node.hpp>
#include <routee/wire/client.hpp>
#include <routee/wire/frame.hpp>
#include <routee/wire/service.hpp>
#include <routee/wire/session.hpp>
#include <routee/wire/transport.hpp>
#include <routee/wire/views.hpp>

#include <doctest.h>

#include <random>
#include <thread>

using namespace routee;
using namespace routee::wire;

namespace {

template <size_t N>
std::array<uint8_t, N> rand_array(std::mt19937_64& rng)
{
    std::array<uint8_t, N> a;
    for (auto& x : a) x = static_cast<uint8_t>(rng());
    return a;
}

Bytes rand_bytes(std::mt19937_64& rng, size_t n)
{
    Bytes b(n);
    for (auto& x : b) x = static_cast<uint8_t>(rng());
    return b;
}

RequestBody random_body(std::mt19937_64& rng, const Block& block)
{
    const auto key = crypto::KeyPair::from_seed(rand_array<32>(rng)).pub;
    switch (rng() % 13) {
    case 0: return AddUser{key, rand_array<20>(rng)};
    case 1: return AddDeposit{rand_array<20>(rng), rng()};
    case 2: return UpdateBoundary{rand_array<20>(rng), rng(), rng(), rand_array<32>(rng)};
    case 3: {
        Payment p{rand_array<20>(rng), rng(), {}};
        for (size_t i = 0, n = 1 + rng() % 40; i < n; ++i) p.batch.push_back({rand_array<20>(rng), rng(), rng()});
        return p;
    }
    case 4: return Settle{rand_array<20>(rng), rng(), rng(), rng()};
    case 5: return QueryUser{rand_array<20>(rng), rng()};
    case 6: return QueryLatestBlock{};
    case 7: return QueryLedger{};
    case 8: return InsertBlock{rng(), block};
    case 9: return Terminate{rng()};
    case 10: return BuildSettlement{rng()};
    case 11: return GetPlan{rng()};
    default: return TakeSnapshot{rng()};
    }
}

struct Pair {
    Session client;
    Session hub;
};

Pair handshake(const crypto::KeyPair& hub_key)
{
    ClientHandshake hs(hub_key.pub);
    auto accepted = hub_accept(hub_key, hs.init_payload());
    return Pair{hs.finish(accepted.ack_payload), std::move(accepted.session)};
}

Status status_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const ProtocolError& e) {
        return e.status();
    }
    return Status::ok;
}

std::string session_error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const ProtocolError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("request encoding round-trips")
{
    sim::SimNode node(ChainParams::trivial(), 1);
    node.submit_tx(node.pay_from_miner(Address{3}, 777, 226));
    const Block block = node.mine_pending();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        Request r{random_body(rng, block), rand_bytes(rng, rng() % 400)};
        const Bytes raw = encode_request(r);
        CHECK(decode_request(raw) == r);
        if (raw.size() > 1) {
            CHECK(status_of([&] { decode_request(ByteView(raw.data(), raw.size() - 1)); }) == Status::malformed_frame);
        }
    }
    Bytes junk{0x7f, 0, 0};
    CHECK(status_of([&] { decode_request(junk); }) == Status::unknown_type);
}

TEST_CASE("responses and views round-trip")
{
    Response r{Status::receiver_not_ready, "nope", {1, 2, 3}};
    CHECK(decode_response(encode_response(r)) == r);

    hub::UserState u;
    u.user_address = Address{1};
    u.public_key = crypto::KeyPair::from_seed(Hash256{2}).pub;
    u.nonce = 7;
    u.balance = 99;
    u.boundary_block = 4;
    CHECK(decode_user(encode_user(u)) == u);
    hub::LedgerView v;
    v.ledger.rf_pending = 5;
    v.ledger.host_nonce = 9;
    v.ledger.host_public_key = crypto::KeyPair::from_seed(Hash256{3}).pub;
    v.users = 3;
    v.plan_outstanding = true;
    const auto v2 = decode_ledger(encode_ledger(v));
    CHECK(v2.ledger.rf_pending == 5);
    CHECK(v2.ledger.host_nonce == 9);
    CHECK(v2.users == 3);
    CHECK(v2.plan_outstanding);
    CHECK(decode_u64(encode_u64(1234567)) == 1234567);
    CHECK_FALSE(decode_plan(encode_plan(std::nullopt)).has_value());
    CHECK(status_of([] { decode_u64(Bytes{1, 2}); }) == Status::malformed_frame);
}

TEST_CASE("frames")
{
    std::mt19937_64 rng(4);
    for (size_t n : {size_t(0), size_t(1), size_t(1000), size_t(64 * 1024)}) {
        const Bytes payload = rand_bytes(rng, n);
        const Bytes raw = encode_frame(FrameType::envelope, payload);
        CHECK(raw.size() == 5 + n);
        CHECK(raw[0] == ((n + 1) >> 24));
        CHECK(raw[3] == ((n + 1) & 0xff));
        CHECK(raw[4] == 3);
        const Frame f = decode_frame(raw);
        CHECK(f.type == FrameType::envelope);
        CHECK(f.payload == payload);
        CHECK(status_of([&] { decode_frame(ByteView(raw.data(), raw.size() - 1)); }) == Status::malformed_frame);
    }
    CHECK(status_of([] { decode_frame(Bytes{0, 0}); }) == Status::malformed_frame);
    CHECK(status_of([] { decode_frame(Bytes{0, 0, 0, 0}); }) == Status::malformed_frame);
}

TEST_CASE("handshake")
{
    const auto hub_key = crypto::KeyPair::from_seed(Hash256{0x11});
    auto p = handshake(hub_key);
    CHECK(p.client.key() == p.hub.key());
    CHECK(p.client.id() == p.hub.id());

    auto q = handshake(hub_key);
    CHECK(q.client.key() != p.client.key());
    CHECK(q.client.id() != p.client.id());

    ClientHandshake hs(hub_key.pub);
    const auto acc = hub_accept(hub_key, hs.init_payload());
    // every byte of the ack is covered: id, signature and key confirmation
    for (size_t i = 0; i < acc.ack_payload.size(); ++i) {
        Bytes bad = acc.ack_payload;
        bad[i] ^= 0x01;
        CHECK(status_of([&] { hs.finish(bad); }) == Status::handshake_failure);
    }
    CHECK(status_of([&] { hs.finish(acc.ack_payload); }) == Status::ok);

    // a hub holding a different static key is not accepted
    const auto impostor = crypto::KeyPair::from_seed(Hash256{0x12});
    ClientHandshake hs2(hub_key.pub);
    const auto acc2 = hub_accept(impostor, hs2.init_payload());
    CHECK(status_of([&] { hs2.finish(acc2.ack_payload); }) == Status::handshake_failure);
    CHECK(status_of([&] { hub_accept(hub_key, Bytes(31, 1)); }) == Status::handshake_failure);
}

TEST_CASE("sessions enforce order and integrity")
{
    const auto hub_key = crypto::KeyPair::from_seed(Hash256{0x21});
    std::mt19937_64 rng(8);

    SUBCASE("round trip")
    {
        auto p = handshake(hub_key);
        for (int i = 0; i < 50; ++i) {
            const Bytes m = rand_bytes(rng, rng() % 70'000);
            const Envelope e = p.client.seal(m);
            CHECK(Envelope::decode(e.encode()) == e);
            CHECK(p.hub.open(e) == m);
            const Bytes back = rand_bytes(rng, rng() % 100);
            CHECK(p.client.open(p.hub.seal(back)) == back);
        }
    }
    SUBCASE("replay of seq 5")
    {
        auto p = handshake(hub_key);
        std::vector<Envelope> sent;
        for (int i = 0; i < 6; ++i) sent.push_back(p.client.seal(Bytes{uint8_t(i)}));
        for (int i = 0; i < 6; ++i) p.hub.open(sent[i]);
        CHECK(session_error_of([&] { p.hub.open(sent[5]); }) == "seq-repeat");
        CHECK(p.hub.aborted());
        CHECK(session_error_of([&] { p.hub.open(sent[5]); }) == "aborted");
    }
    SUBCASE("5 then 7")
    {
        auto p = handshake(hub_key);
        std::vector<Envelope> sent;
        for (int i = 0; i < 8; ++i) sent.push_back(p.client.seal(Bytes{uint8_t(i)}));
        for (int i = 0; i <= 5; ++i) p.hub.open(sent[i]);
        CHECK(session_error_of([&] { p.hub.open(sent[7]); }) == "seq-gap");
    }
    SUBCASE("any bit flip fails authentication")
    {
        const Bytes msg = rand_bytes(rng, 64);
        auto p = handshake(hub_key);
        const Bytes raw = p.client.seal(msg).encode();
        for (size_t bit = 0; bit < raw.size() * 8; bit += 3) {
            auto q = handshake(hub_key);
            Envelope e = q.client.seal(msg);
            Bytes r = e.encode();
            r[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
            const Envelope bad = Envelope::decode(r);
            CHECK(status_of([&] { q.hub.open(bad); }) == Status::session_error);
            CHECK(q.hub.aborted());
        }
    }
    SUBCASE("hub envelopes do not open as client envelopes")
    {
        auto p = handshake(hub_key);
        const Envelope from_hub = p.hub.seal(Bytes{1, 2, 3});
        CHECK(status_of([&] { p.hub.open(from_hub); }) == Status::session_error);
    }
}

TEST_CASE("a relay cannot change a signed fee")
{
    scenario::TestbedOptions opt;
    opt.min_routing_fee = 10;
    scenario::Testbed tb(31, opt);
    const auto& a = tb.register_user("a");
    const auto& b = tb.register_user("b");
    tb.deposit(a, 100'000);
    REQUIRE(tb.set_boundary(b).status == Status::ok);

    const Request req = tb.sign(a, Payment{a.address, 0, {PaymentEntry{b.address, 500, 25}}});
    Request other = req;
    std::get<Payment>(other.body).batch[0].routing_fee = 25 ^ 0x40;
    const Bytes plain = encode_request(req), plain2 = encode_request(other);
    size_t fee_at = 0;
    while (plain[fee_at] == plain2[fee_at]) ++fee_at;

    HubService& svc = tb.service();
    HubService::Connection conn;
    ClientHandshake hs(svc.public_key());
    const auto ack = decode_frame(*svc.handle_frame(conn, encode_frame(FrameType::handshake_init, hs.init_payload())));
    Session s = hs.finish(ack.payload);
    Bytes frame = encode_frame(FrameType::envelope, s.seal(plain).encode());
    // frame header 5, envelope header 28, then the ciphertext aligned with the plaintext
    frame[5 + 28 + fee_at] ^= 0x40;
    const auto before = tb.ledger().ledger.rf_pending;
    const auto reply = decode_frame(*svc.handle_frame(conn, frame));
    CHECK(reply.type == FrameType::error);
    CHECK(decode_response(reply.payload).status == Status::session_error);
    CHECK(conn.closed);
    CHECK(tb.ledger().ledger.rf_pending == before);
    CHECK(tb.user(b).balance == 0);
}

TEST_CASE("hub client over loopback and TCP")
{
    scenario::Testbed tb(32);
    const auto& a = tb.register_user("a");
    HubService& svc = tb.service();

    LoopbackChannel loop(svc);
    HubClient client(loop, svc.public_key());
    client.handshake();
    CHECK(client.connected());
    const Response r = client.call(tb.sign(a, QueryUser{a.address, 0}));
    CHECK(r.status == Status::ok);
    CHECK(decode_user(r.payload).user_address == a.address);

    FrameServer server("127.0.0.1", 0, [&svc] {
        struct Handler final : ConnectionHandler {
            HubService& svc;
            HubService::Connection conn;
            explicit Handler(HubService& s) : svc(s) {}
            std::optional<Bytes> on_frame(ByteView raw) override { return svc.handle_frame(conn, raw); }
            bool closed() const override { return conn.closed; }
        };
        return std::make_unique<Handler>(svc);
    });
    server.start();
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            auto ch = tcp_connect("127.0.0.1", server.port());
            HubClient c(*ch, svc.public_key());
            c.handshake();
            for (int i = 0; i < 20; ++i)
                if (c.call(Request{QueryLatestBlock{}, {}}).status == Status::ok) ++ok;
        });
    for (auto& t : threads) t.join();
    server.stop();
    CHECK(ok == 80);

    CHECK(status_of([] { tcp_connect("127.0.0.1", 1); }) == Status::io_error);
}
