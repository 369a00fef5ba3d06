// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "oracles.hpp"

#include <gmpxx.h>
#include <openssl/sha.h>

#include <algorithm>

namespace routee::oracle {
namespace {

mpz_class to_mpz(const uint256& v)
{
    mpz_class out;
    out.set_str(v.str(), 10);
    return out;
}

std::optional<mpz_class> decode(uint32_t bits)
{
    const unsigned size = bits >> 24;
    mpz_class word = bits & 0x007fffff;
    if ((bits & 0x00800000) && word != 0) return std::nullopt;
    if (size <= 3) {
        word >>= 8 * (3 - size);
    } else {
        word <<= 8 * (size - 3);
    }
    if (mpz_sizeinbase(word.get_mpz_t(), 2) > 256 && word != 0) return std::nullopt;
    return word;
}

uint32_t encode(const mpz_class& v)
{
    if (v == 0) return 0;
    unsigned size = static_cast<unsigned>((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
    mpz_class compact = size <= 3 ? mpz_class(v << (8 * (3 - size))) : mpz_class(v >> (8 * (size - 3)));
    uint32_t c = static_cast<uint32_t>(compact.get_ui());
    if (c & 0x00800000) {
        c >>= 8;
        ++size;
    }
    return c | (size << 24);
}

} // namespace

uint32_t retarget(uint32_t prev_bits, uint32_t first_ts, uint32_t last_ts, uint64_t timespan, const uint256& pow_limit)
{
    const auto prev = decode(prev_bits);
    if (!prev) throw std::invalid_argument("oracle: malformed prev bits");
    mpz_class actual = mpz_class(std::to_string(last_ts)) - mpz_class(std::to_string(first_ts));
    const mpz_class ts(std::to_string(timespan));
    const mpz_class lo = ts / 4, hi = ts * 4;
    if (actual < lo) actual = lo;
    if (actual > hi) actual = hi;
    mpz_class next = *prev * actual / ts;
    const mpz_class limit = to_mpz(pow_limit);
    if (next > limit) next = limit;
    return encode(next);
}

std::optional<std::string> decode_compact_hex(uint32_t bits)
{
    auto v = decode(bits);
    if (!v) return std::nullopt;
    return v->get_str(16);
}

uint32_t encode_compact_hex(const std::string& hex) { return encode(mpz_class(hex, 16)); }

Hash256 sha256d(ByteView data)
{
    Hash256 once{}, twice{};
    SHA256(data.data(), data.size(), once.data());
    SHA256(once.data(), once.size(), twice.data());
    return twice;
}

Hash256 merkle_root(const std::vector<Hash256>& leaves)
{
    if (leaves.empty()) return Hash256{};
    if (leaves.size() == 1) return leaves[0];
    std::vector<Hash256> level = leaves;
    if (level.size() % 2) level.push_back(level.back());
    std::vector<Hash256> up;
    for (size_t i = 0; i < level.size(); i += 2) {
        uint8_t pair[64];
        std::copy(level[i].begin(), level[i].end(), pair);
        std::copy(level[i + 1].begin(), level[i + 1].end(), pair + 32);
        up.push_back(sha256d(ByteView(pair, 64)));
    }
    return merkle_root(up);
}

CoinMap replay(const std::vector<Block>& blocks)
{
    CoinMap coins;
    for (const Block& b : blocks) {
        for (const Transaction& tx : b.txs) {
            if (!tx.is_coinbase())
                for (const TxIn& in : tx.inputs) coins.erase({in.prevout.txid, in.prevout.vout});
            const Hash256 id = sha256d(serialize_tx(tx));
            for (uint32_t i = 0; i < tx.outputs.size(); ++i)
                coins[{id, i}] = {tx.outputs[i].value, tx.outputs[i].address};
        }
    }
    return coins;
}

CoinMap to_map(const UtxoSet& utxo)
{
    CoinMap out;
    for (const auto& [op, coin] : utxo.coins()) out[{op.txid, op.vout}] = {coin.value, coin.address};
    return out;
}

std::optional<size_t> max_feasible_settlement(const std::vector<Amount>& fees, Amount fares, Amount reserve,
                                              uint64_t n_inputs, Amount fee_avg)
{
    const size_t n = fees.size();
    std::optional<size_t> best;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        unsigned __int128 collected = static_cast<unsigned __int128>(fares) + reserve;
        size_t k = 0;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                collected += fees[i];
                ++k;
            }
        const unsigned __int128 need =
            static_cast<unsigned __int128>(148 * n_inputs + 34 * (k + 1) + 10) * fee_avg;
        if (collected >= need && (!best || k > *best)) best = k;
    }
    return best;
}

wire::Status payment_verdict(const std::map<Address, hub::UserState>& users, const Address& sender,
                             const std::vector<wire::PaymentEntry>& batch, Amount min_routing_fee)
{
    using wire::Status;
    const auto s = users.find(sender);
    if (s == users.end()) return Status::unknown_user;
    if (batch.empty()) return Status::invalid_amount;
    unsigned __int128 total = 0;
    for (const auto& e : batch) {
        if (e.routing_fee < min_routing_fee) return Status::fee_below_minimum;
        total += static_cast<unsigned __int128>(e.amount) + e.routing_fee;
    }
    if (total > s->second.balance) return Status::insufficient_balance;
    for (const auto& e : batch) {
        const auto r = users.find(e.receiver);
        if (r == users.end()) return Status::unknown_user;
        if (!r->second.boundary_block) return Status::receiver_not_ready;
        if (s->second.max_source_block && *s->second.max_source_block > *r->second.boundary_block)
            return Status::receiver_not_ready;
    }
    return Status::ok;
}

Conservation conservation(const hub::HubState& s)
{
    Conservation c;
    for (const auto& d : s.owned) {
        c.held += d.value;
        c.owed += d.fare;
    }
    if (s.plan) c.held += s.plan->terminal ? s.plan->host_payout : s.plan->leftover_value;
    for (const auto& [_, u] : s.users) c.owed += u.balance;
    for (const auto& r : s.queue) c.owed += static_cast<unsigned __int128>(r.amount) + r.fee;
    const auto& L = s.ledger;
    c.owed += static_cast<unsigned __int128>(L.rf_pending) + L.fee_reserve + L.rf_inflight;
    c.owed += static_cast<unsigned __int128>(L.rf_confirmed) - L.rf_withdrawn - L.rf_spent_on_fees;
    return c;
}

} // namespace routee::oracle
