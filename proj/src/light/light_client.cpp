// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/light/light_client.hpp>
#include <routee/sim/node.hpp>

namespace routee::light {

NodeSource::NodeSource(const sim::SimNode& node, std::string name) : node_(node), name_(std::move(name)) {}

Height NodeSource::tip_height() { return node_.tip_height(); }

std::vector<BlockHeader> NodeSource::fetch(Height from, uint16_t count)
{
    std::vector<BlockHeader> out;
    const auto& chain = node_.headers();
    for (Height h = from; h < from + count && chain.contains_height(h); ++h) out.push_back(chain.at(h));
    return out;
}

VectorSource::VectorSource(std::vector<BlockHeader> headers, std::string name)
    : headers_(std::move(headers)), name_(std::move(name))
{
    if (headers_.empty()) throw std::invalid_argument("empty header source");
}

std::vector<BlockHeader> VectorSource::fetch(Height from, uint16_t count)
{
    std::vector<BlockHeader> out;
    for (Height h = from; h < from + count && h < headers_.size(); ++h) out.push_back(headers_[h]);
    return out;
}

const HeaderChain& HeaderStore::selected() const
{
    if (!selected_index) throw LightClientError("no-valid-chain");
    return *candidates[*selected_index].chain;
}

const std::string& HeaderStore::selected_peer() const
{
    if (!selected_index) throw LightClientError("no-valid-chain");
    return candidates[*selected_index].peer;
}

static PeerCandidate sync_one(HeaderSource& peer, const HeaderChain& base, const ClientConfig& config, bool& reachable)
{
    PeerCandidate c;
    HeaderChain chain = base;
    reachable = false;
    try {
        c.peer = peer.name();
        const Height tip = peer.tip_height();
        reachable = true;
        Height h = chain.tip_height() + 1;
        while (h <= tip) {
            const auto count = static_cast<uint16_t>(std::min<Height>(config.batch_size, tip - h + 1));
            auto batch = peer.fetch(h, count);
            ++c.batches;
            if (batch.size() != count) {
                c.dropped_reason = "short-batch at height " + std::to_string(h);
                return c;
            }
            for (const auto& header : batch) {
                std::string reason = chain.check_next(header);
                if (!reason.empty()) {
                    c.dropped_reason = reason + " at height " + std::to_string(h);
                    return c;
                }
                chain.append(header);
                ++h;
            }
        }
    } catch (const std::exception& e) {
        c.dropped_reason = std::string(reachable ? "peer-error: " : "unreachable: ") + e.what();
        return c;
    }
    c.chain = std::move(chain);
    return c;
}

std::optional<size_t> select_best(std::span<const PeerCandidate> candidates)
{
    std::optional<size_t> best;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].chain) continue;
        if (!best || candidates[i].chain->cumulative_work() > candidates[*best].chain->cumulative_work()) best = i;
    }
    return best;
}

HeaderStore sync_headers(std::span<HeaderSource* const> peers, const HeaderChain& base, const ClientConfig& config)
{
    if (config.k_user < 1) throw std::invalid_argument("k_user must be at least 1");
    if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
    if (peers.empty() || (peers.size() < 2 && !config.trust_single_peer)) throw LightClientError("insufficient-peers");

    HeaderStore store;
    size_t reachable_count = 0;
    for (HeaderSource* peer : peers) {
        bool reachable = false;
        store.candidates.push_back(sync_one(*peer, base, config, reachable));
        reachable_count += reachable;
    }
    if (reachable_count == 0) throw LightClientError("all-peers-unreachable");
    store.selected_index = select_best(store.candidates);
    if (!store.selected_index) throw LightClientError("no-valid-chain");
    return store;
}

Boundary choose_boundary(const HeaderChain& chain, Height k_user)
{
    if (k_user < 1) throw std::invalid_argument("k_user must be at least 1");
    if (chain.size() <= k_user) throw LightClientError("chain-too-short");
    const Height h = chain.tip_height() - k_user;
    return Boundary{h, chain.hash_at(h)};
}

} // namespace routee::light
