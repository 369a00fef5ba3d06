// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/hash.hpp>
#include <routee/chain/transaction.hpp>

namespace routee {
namespace {

constexpr uint32_t kTxVersion = 1;

void write_tx(ByteWriter& w, const Transaction& tx, bool with_unlocks)
{
    if (tx.inputs.size() > 0xffff || tx.outputs.size() > 0xffff) throw std::length_error("too many tx inputs/outputs");
    w.u32_le(kTxVersion);
    w.u16(static_cast<uint16_t>(tx.inputs.size()));
    for (const TxIn& in : tx.inputs) {
        w.raw(in.prevout.txid).u32(in.prevout.vout).u64(in.value);
        if (with_unlocks) {
            w.var_bytes(in.unlock);
        } else {
            w.u16(0);
        }
    }
    w.u16(static_cast<uint16_t>(tx.outputs.size()));
    for (const TxOut& out : tx.outputs) w.u64(out.value).raw(out.address);
}

} // namespace

Bytes serialize_tx(const Transaction& tx)
{
    ByteWriter w;
    write_tx(w, tx, true);
    return std::move(w).take();
}

Transaction parse_tx(ByteReader& r)
{
    if (r.u32_le() != kTxVersion) throw DecodeError("unsupported transaction version");
    Transaction tx;
    uint16_t n_in = r.u16();
    tx.inputs.resize(n_in);
    for (TxIn& in : tx.inputs) {
        in.prevout.txid = r.array<32>();
        in.prevout.vout = r.u32();
        in.value = r.u64();
        in.unlock = r.var_bytes();
    }
    uint16_t n_out = r.u16();
    tx.outputs.resize(n_out);
    for (TxOut& out : tx.outputs) {
        out.value = r.u64();
        out.address = r.array<20>();
    }
    return tx;
}

Transaction parse_tx(ByteView raw)
{
    ByteReader r(raw);
    Transaction tx = parse_tx(r);
    r.expect_end();
    return tx;
}

Hash256 tx_id(const Transaction& tx) { return sha256d(serialize_tx(tx)); }

Hash256 signature_hash(const Transaction& tx)
{
    ByteWriter w;
    write_tx(w, tx, false);
    return sha256d(w.data());
}

std::optional<Amount> output_total(const Transaction& tx)
{
    Amount total = 0;
    for (const TxOut& out : tx.outputs) {
        if (__builtin_add_overflow(total, out.value, &total)) return std::nullopt;
    }
    return total;
}

std::optional<Amount> tx_fee(const Transaction& tx)
{
    Amount in_total = 0;
    for (const TxIn& in : tx.inputs) {
        if (__builtin_add_overflow(in_total, in.value, &in_total)) return std::nullopt;
    }
    auto out_total = output_total(tx);
    if (!out_total || *out_total > in_total) return std::nullopt;
    return in_total - *out_total;
}

Transaction make_coinbase(Height height, std::vector<TxOut> outputs)
{
    Transaction tx;
    TxIn in;
    in.prevout = OutPoint::null();
    ByteWriter w;
    w.u64(height);
    in.unlock = std::move(w).take();
    tx.inputs.push_back(std::move(in));
    tx.outputs = std::move(outputs);
    return tx;
}

Bytes make_unlock(const crypto::KeyPair& key, const Hash256& sighash)
{
    ByteWriter w;
    Bytes pk = key.pub.encode();
    Bytes sig = crypto::sign(key, sighash);
    w.var_bytes(pk).var_bytes(sig);
    return std::move(w).take();
}

bool verify_unlock(ByteView unlock, const Address& lock_address, const Hash256& sighash)
{
    try {
        ByteReader r(unlock);
        Bytes pk_raw = r.var_bytes();
        Bytes sig = r.var_bytes();
        r.expect_end();
        if (hash160(pk_raw) != lock_address) return false;
        return crypto::verify(crypto::PublicKey::decode(pk_raw), sighash, sig);
    } catch (const DecodeError&) {
        return false;
    }
}

void sign_inputs(Transaction& tx, std::span<const crypto::KeyPair* const> keys)
{
    if (keys.size() != tx.inputs.size()) throw std::invalid_argument("one key per input required");
    const Hash256 sighash = signature_hash(tx);
    for (size_t i = 0; i < keys.size(); ++i) tx.inputs[i].unlock = make_unlock(*keys[i], sighash);
}

} // namespace routee
