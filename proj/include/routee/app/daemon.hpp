// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/app/config.hpp>
#include <routee/hub/hub.hpp>

#include <atomic>
#include <functional>
#include <ostream>

namespace routee::app {

/// Called once the listener is bound, with the actual port.
using ReadyCallback = std::function<void(uint16_t port)>;

/// Builds the hub from the configured block source (or the snapshot when restoring).
/// Throws ConfigError or wire::ProtocolError with a diagnostic.
hub::Hub load_or_init_hub(const DaemonConfig& cfg, std::ostream& log);

/// Runs the hub daemon until `stop` becomes true, then writes a final snapshot.
/// Returns the process exit code.
int run_hub_daemon(const DaemonConfig& cfg, const std::atomic<bool>& stop, std::ostream& log, ReadyCallback ready = {});

/// Runs a simchain node serving headers, blocks and transaction submission until `stop`.
int run_simchain_daemon(const SimchainConfig& cfg, const std::atomic<bool>& stop, std::ostream& log,
                        ReadyCallback ready = {});

} // namespace routee::app
