// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/bytes.hpp>

#include <deque>
#include <random>
#include <set>
#include <vector>

namespace routee::sim {

/// Misbehaviour applied by the untrusted relay to each frame it forwards.
struct RelaySchedule {
    double drop = 0.0;
    double duplicate = 0.0;
    double delay = 0.0;          // held back and released after later frames (reordering)
    size_t max_delay = 3;        // frames a delayed message may be overtaken by
    std::set<size_t> drop_indices;   // frame indices (0-based, per relay) always dropped
    uint64_t seed = 0;

    static RelaySchedule pass_through() { return {}; }
    static RelaySchedule random(uint64_t seed);
};

/// One direction of an adversarial channel. Records every byte it carries.
class Relay {
public:
    explicit Relay(RelaySchedule schedule = {});

    /// Frames delivered to the far side as a result of sending `frame` (possibly none or several).
    std::vector<Bytes> transmit(Bytes frame);
    /// Releases every frame still held back.
    std::vector<Bytes> flush();

    const std::vector<Bytes>& observed() const { return observed_; }
    size_t forwarded() const { return forwarded_; }

private:
    struct Held {
        Bytes frame;
        size_t release_after;
    };

    RelaySchedule schedule_;
    std::mt19937_64 rng_;
    std::deque<Held> held_;
    std::vector<Bytes> observed_;
    size_t index_ = 0;
    size_t forwarded_ = 0;
};

/// True if `needle` occurs anywhere in the observed traffic.
bool traffic_contains(const std::vector<Bytes>& traffic, ByteView needle);

} // namespace routee::sim
