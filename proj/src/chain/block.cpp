// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/chain/block.hpp>
#include <routee/chain/merkle.hpp>

#include <unordered_set>

namespace routee {

std::vector<Hash256> Block::txids() const
{
    std::vector<Hash256> out;
    out.reserve(txs.size());
    for (const Transaction& tx : txs) out.push_back(tx_id(tx));
    return out;
}

Bytes serialize_block(const Block& block)
{
    ByteWriter w;
    w.raw(serialize_header(block.header));
    w.u32(static_cast<uint32_t>(block.txs.size()));
    for (const Transaction& tx : block.txs) w.raw(serialize_tx(tx));
    return std::move(w).take();
}

Block parse_block(ByteReader& r)
{
    Block b;
    b.header = parse_header(r.raw(BlockHeader::kSize));
    uint32_t n = r.u32();
    if (n > r.remaining()) throw DecodeError("transaction count exceeds payload");
    b.txs.reserve(n);
    for (uint32_t i = 0; i < n; ++i) b.txs.push_back(parse_tx(r));
    return b;
}

Block parse_block(ByteView raw)
{
    ByteReader r(raw);
    Block b = parse_block(r);
    r.expect_end();
    return b;
}

const Coin* UtxoSet::find(const OutPoint& o) const
{
    auto it = coins_.find(o);
    return it == coins_.end() ? nullptr : &it->second;
}

void UtxoSet::add(const OutPoint& o, const Coin& c)
{
    if (!coins_.emplace(o, c).second) throw ChainError("duplicate outpoint");
}

void UtxoSet::spend(const OutPoint& o)
{
    if (coins_.erase(o) == 0) throw ChainError("spending missing outpoint");
}

void UtxoSet::apply(const Block& block)
{
    for (const Transaction& tx : block.txs) {
        if (!tx.is_coinbase()) {
            for (const TxIn& in : tx.inputs) spend(in.prevout);
        }
        const Hash256 id = tx_id(tx);
        for (uint32_t i = 0; i < tx.outputs.size(); ++i) add({id, i}, {tx.outputs[i].value, tx.outputs[i].address});
    }
}

Amount UtxoSet::total_value() const
{
    Amount total = 0;
    for (const auto& [_, coin] : coins_) total += coin.value;
    return total;
}

Amount UtxoSet::balance_of(const Address& a) const
{
    Amount total = 0;
    for (const auto& [_, coin] : coins_) {
        if (coin.address == a) total += coin.value;
    }
    return total;
}

std::string_view to_string(RejectReason r)
{
    switch (r) {
    case RejectReason::none: return "ok";
    case RejectReason::bad_prevblk: return "bad-prevblk";
    case RejectReason::bad_diffbits: return "bad-diffbits";
    case RejectReason::high_hash: return "high-hash";
    case RejectReason::malformed_bits: return "malformed-bits";
    case RejectReason::missing_window: return "missing-window";
    case RejectReason::merkle_mismatch: return "merkle-mismatch";
    case RejectReason::no_coinbase: return "no-coinbase";
    case RejectReason::bad_coinbase: return "bad-coinbase";
    case RejectReason::missing_utxo: return "missing-utxo";
    case RejectReason::value_mismatch: return "value-mismatch";
    case RejectReason::double_spend: return "double-spend";
    case RejectReason::bad_signature: return "bad-signature";
    case RejectReason::value_overflow: return "value-overflow";
    }
    return "unknown";
}

namespace {

// Spends resolve against the base set plus outputs created earlier in the same block.
class BlockView {
public:
    explicit BlockView(const UtxoSet& base) : base_(base) {}

    const Coin* find(const OutPoint& o) const
    {
        if (spent_.count(o)) return nullptr;
        if (auto it = created_.find(o); it != created_.end()) return &it->second;
        return base_.find(o);
    }
    bool was_spent(const OutPoint& o) const { return spent_.count(o) != 0; }
    void spend(const OutPoint& o) { spent_.insert(o); }
    void add(const Hash256& txid, const Transaction& tx)
    {
        for (uint32_t i = 0; i < tx.outputs.size(); ++i)
            created_[{txid, i}] = Coin{tx.outputs[i].value, tx.outputs[i].address};
    }

private:
    const UtxoSet& base_;
    std::unordered_set<OutPoint, OutPointHasher> spent_;
    std::unordered_map<OutPoint, Coin, OutPointHasher> created_;
};

template <class View>
ValidationResult check_inputs(const Transaction& tx, const View& view, bool check_signatures, Amount& fee_out)
{
    if (tx.inputs.empty()) return ValidationResult::reject(RejectReason::missing_utxo, "no inputs");
    std::unordered_set<OutPoint, OutPointHasher> seen;
    Amount in_total = 0;
    for (const TxIn& in : tx.inputs) {
        if (in.prevout.is_null()) return ValidationResult::reject(RejectReason::bad_coinbase, "null prevout");
        if (!seen.insert(in.prevout).second) return ValidationResult::reject(RejectReason::double_spend, "repeated outpoint");
        const Coin* coin = view.find(in.prevout);
        if (!coin) {
            if constexpr (requires { view.was_spent(in.prevout); }) {
                if (view.was_spent(in.prevout))
                    return ValidationResult::reject(RejectReason::double_spend, "outpoint spent earlier in block");
            }
            return ValidationResult::reject(RejectReason::missing_utxo, to_hex(in.prevout.txid));
        }
        if (coin->value != in.value) return ValidationResult::reject(RejectReason::value_mismatch);
        if (__builtin_add_overflow(in_total, in.value, &in_total)) return ValidationResult::reject(RejectReason::value_overflow);
    }
    auto out_total = output_total(tx);
    if (!out_total || *out_total > in_total) return ValidationResult::reject(RejectReason::value_overflow, "outputs exceed inputs");
    if (check_signatures) {
        const Hash256 sighash = signature_hash(tx);
        for (const TxIn& in : tx.inputs) {
            if (!verify_unlock(in.unlock, view.find(in.prevout)->address, sighash))
                return ValidationResult::reject(RejectReason::bad_signature);
        }
    }
    fee_out = in_total - *out_total;
    return {};
}

} // namespace

ValidationResult check_transaction(const Transaction& tx, const UtxoSet& utxo, bool check_signatures)
{
    if (tx.is_coinbase()) return ValidationResult::reject(RejectReason::bad_coinbase, "loose coinbase");
    Amount fee = 0;
    return check_inputs(tx, utxo, check_signatures, fee);
}

ValidationResult validate_header(const HeaderChain& chain, const BlockHeader& header)
{
    std::string reason = chain.check_next(header);
    if (reason.empty()) return {};
    if (reason == "bad-prevblk") return ValidationResult::reject(RejectReason::bad_prevblk);
    if (reason == "bad-diffbits") return ValidationResult::reject(RejectReason::bad_diffbits);
    if (reason == "high-hash") return ValidationResult::reject(RejectReason::high_hash);
    if (reason == "missing-window") return ValidationResult::reject(RejectReason::missing_window);
    return ValidationResult::reject(RejectReason::malformed_bits, reason);
}

ValidationResult validate_block(const HeaderChain& chain, const UtxoSet& utxo, const Block& block, bool check_signatures)
{
    if (auto r = validate_header(chain, block.header); !r.ok()) return r;
    if (block.txs.empty()) return ValidationResult::reject(RejectReason::no_coinbase);
    const std::vector<Hash256> ids = block.txids();
    if (merkle_root(ids) != block.header.merkle_root) return ValidationResult::reject(RejectReason::merkle_mismatch);
    if (!block.txs[0].is_coinbase()) return ValidationResult::reject(RejectReason::no_coinbase);

    BlockView view(utxo);
    Amount fees = 0;
    for (size_t i = 1; i < block.txs.size(); ++i) {
        const Transaction& tx = block.txs[i];
        if (tx.is_coinbase()) return ValidationResult::reject(RejectReason::bad_coinbase, "second coinbase");
        Amount fee = 0;
        if (auto r = check_inputs(tx, view, check_signatures, fee); !r.ok()) return r;
        for (const TxIn& in : tx.inputs) view.spend(in.prevout);
        view.add(ids[i], tx);
        if (__builtin_add_overflow(fees, fee, &fees)) return ValidationResult::reject(RejectReason::value_overflow);
    }
    auto coinbase_value = output_total(block.txs[0]);
    if (!coinbase_value || *coinbase_value > chain.params().block_subsidy + fees)
        return ValidationResult::reject(RejectReason::bad_coinbase, "coinbase pays too much");
    return {};
}

UtxoSet apply_block(UtxoSet utxo, const Block& block)
{
    utxo.apply(block);
    return utxo;
}

} // namespace routee
