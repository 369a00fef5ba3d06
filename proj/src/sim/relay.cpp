// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/sim/relay.hpp>

#include <algorithm>

namespace routee::sim {

RelaySchedule RelaySchedule::random(uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> p(0.0, 0.3);
    RelaySchedule s;
    s.drop = p(rng);
    s.duplicate = p(rng);
    s.delay = p(rng);
    s.max_delay = 1 + rng() % 4;
    s.seed = seed;
    return s;
}

Relay::Relay(RelaySchedule schedule) : schedule_(std::move(schedule)), rng_(schedule_.seed) {}

std::vector<Bytes> Relay::transmit(Bytes frame)
{
    observed_.push_back(frame);
    std::vector<Bytes> out;
    const size_t index = index_++;
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    // Release held frames whose delay has elapsed before deciding on this one.
    for (auto it = held_.begin(); it != held_.end();) {
        if (it->release_after <= index) {
            out.push_back(std::move(it->frame));
            it = held_.erase(it);
        } else {
            ++it;
        }
    }

    const bool drop = schedule_.drop_indices.count(index) || coin(rng_) < schedule_.drop;
    const bool dup = coin(rng_) < schedule_.duplicate;
    const bool delay = coin(rng_) < schedule_.delay;
    const size_t lag = 1 + rng_() % std::max<size_t>(1, schedule_.max_delay);
    if (!drop) {
        if (delay) {
            held_.push_back(Held{frame, index + lag});
        } else {
            out.push_back(frame);
        }
        if (dup) out.push_back(frame);
    }
    forwarded_ += out.size();
    return out;
}

std::vector<Bytes> Relay::flush()
{
    std::vector<Bytes> out;
    for (Held& h : held_) out.push_back(std::move(h.frame));
    held_.clear();
    forwarded_ += out.size();
    return out;
}

bool traffic_contains(const std::vector<Bytes>& traffic, ByteView needle)
{
    if (needle.empty()) return true;
    for (const Bytes& frame : traffic) {
        if (std::search(frame.begin(), frame.end(), needle.begin(), needle.end()) != frame.end()) return true;
    }
    return false;
}

} // namespace routee::sim
