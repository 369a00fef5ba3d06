// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/header.hpp>

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace routee::sim {
class SimNode;
}

namespace routee::light {

class LightClientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Anything that serves headers by height. Implementations may throw on I/O failure.
class HeaderSource {
public:
    virtual ~HeaderSource() = default;
    virtual std::string name() const = 0;
    virtual Height tip_height() = 0;
    virtual std::vector<BlockHeader> fetch(Height from, uint16_t count) = 0;
};

/// Serves the main chain of an in-process node.
class NodeSource final : public HeaderSource {
public:
    NodeSource(const sim::SimNode& node, std::string name);
    std::string name() const override { return name_; }
    Height tip_height() override;
    std::vector<BlockHeader> fetch(Height from, uint16_t count) override;

private:
    const sim::SimNode& node_;
    std::string name_;
};

/// Serves a fixed header list starting at height 0 (for example a forged chain).
class VectorSource final : public HeaderSource {
public:
    VectorSource(std::vector<BlockHeader> headers, std::string name);
    std::string name() const override { return name_; }
    Height tip_height() override { return headers_.size() - 1; }
    std::vector<BlockHeader> fetch(Height from, uint16_t count) override;

private:
    std::vector<BlockHeader> headers_;
    std::string name_;
};

struct ClientConfig {
    Height k_user = 6;
    uint16_t batch_size = 2016;
    /// Accept a single configured peer without cross-checking.
    bool trust_single_peer = false;
};

struct PeerCandidate {
    std::string peer;
    std::optional<HeaderChain> chain;
    std::string dropped_reason;   // empty while the peer is valid
    size_t batches = 0;
};

class HeaderStore {
public:
    std::vector<PeerCandidate> candidates;
    std::optional<size_t> selected_index;

    bool has_selection() const { return selected_index.has_value(); }
    const HeaderChain& selected() const;
    const std::string& selected_peer() const;
};

/// Downloads every peer's chain on top of `base` in batches, validating as it goes, and selects
/// the valid candidate with the most cumulative work (first seen wins ties).
/// Throws LightClientError("insufficient-peers" | "all-peers-unreachable" | "no-valid-chain").
HeaderStore sync_headers(std::span<HeaderSource* const> peers, const HeaderChain& base, const ClientConfig& config);

/// Index of the best candidate among valid ones; nullopt when none is valid.
std::optional<size_t> select_best(std::span<const PeerCandidate> candidates);

struct Boundary {
    Height height = 0;
    Hash256 hash{};
};

/// Header at tip - k. Throws LightClientError("chain-too-short") unless the chain holds more
/// than k headers.
Boundary choose_boundary(const HeaderChain& chain, Height k_user);

} // namespace routee::light
