// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/header.hpp>
#include <routee/crypto/signature.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace routee::app {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Endpoint {
    std::string host = "127.0.0.1";
    uint16_t port = 0;

    /// "host:port" or ":port".
    static Endpoint parse(std::string_view text);
    std::string str() const;
};

/// Flat `key = value` file. Lookups prefer the ROUTEE_<KEY> environment variable over the file.
class FlatConfig {
public:
    static FlatConfig load(const std::string& path);
    static FlatConfig parse(std::string_view text);

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    const std::map<std::string, std::string>& entries() const { return entries_; }
    std::string dump() const;

private:
    std::map<std::string, std::string> entries_;
};

ChainParams params_by_name(std::string_view name);

struct DaemonConfig {
    Endpoint listen{"127.0.0.1", 7450};
    Endpoint simchain{"127.0.0.1", 7451};
    std::string snapshot_path = "routee-hub.snapshot";
    Amount min_routing_fee = 1;
    std::string host_key_path = "host.key";
    std::string hub_key_path = "hub.key";
    Height start_height = 0;
    size_t fee_window = 2016;
    crypto::CryptoMode crypto_mode = crypto::CryptoMode::fast_test;
    std::string params = "simchain";
    /// Resume from the snapshot file when it exists instead of initialising from simchain.
    bool restore = false;

    static DaemonConfig from(const FlatConfig& cfg);
};

struct SimchainConfig {
    Endpoint listen{"127.0.0.1", 7451};
    uint64_t seed = 1;
    std::string params = "simchain";
    size_t premine = 0;
    /// Fee rate of the wallet payment placed in each premined block (0 = empty blocks).
    Amount traffic_fee_rate = 10;

    static SimchainConfig from(const FlatConfig& cfg);
};

// Key files are small JSON documents: {"scheme", "public", "address"} plus "secret" for key pairs.
void write_keypair(const std::string& path, const crypto::KeyPair& key);
crypto::KeyPair read_keypair(const std::string& path);
void write_public_key(const std::string& path, const crypto::PublicKey& key);
/// Reads the public half of either file kind.
crypto::PublicKey read_public_key(const std::string& path);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, ByteView data);
Bytes read_file(const std::string& path);

uint64_t parse_u64(std::string_view text, std::string_view what);

} // namespace routee::app
