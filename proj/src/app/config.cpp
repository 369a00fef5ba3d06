// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/app/config.hpp>

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace routee::app {
namespace {

std::string trim(std::string_view s)
{
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string env_name(const std::string& key)
{
    std::string out = "ROUTEE_";
    for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string scheme_name(crypto::SigScheme s) { return s == crypto::SigScheme::ed25519 ? "ed25519" : "rsa3072"; }

} // namespace

uint64_t parse_u64(std::string_view text, std::string_view what)
{
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

Endpoint Endpoint::parse(std::string_view text)
{
    const size_t colon = text.rfind(':');
    if (colon == std::string_view::npos) throw ConfigError("endpoint needs host:port: '" + std::string(text) + "'");
    Endpoint e;
    if (colon > 0) e.host = std::string(text.substr(0, colon));
    const uint64_t port = parse_u64(text.substr(colon + 1), "port");
    if (port > 65535) throw ConfigError("port out of range: " + std::to_string(port));
    e.port = static_cast<uint16_t>(port);
    return e;
}

std::string Endpoint::str() const { return host + ":" + std::to_string(port); }

FlatConfig FlatConfig::parse(std::string_view text)
{
    FlatConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        cfg.entries_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return cfg;
}

FlatConfig FlatConfig::load(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::optional<std::string> FlatConfig::get(const std::string& key) const
{
    if (const char* env = std::getenv(env_name(key).c_str())) return std::string(env);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string FlatConfig::get_or(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

std::string FlatConfig::dump() const
{
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

ChainParams params_by_name(std::string_view name)
{
    if (name == "simchain") return ChainParams::simchain();
    if (name == "trivial") return ChainParams::trivial();
    if (name == "mainnet-like") return ChainParams::mainnet_like();
    throw ConfigError("unknown chain params '" + std::string(name) + "'");
}

DaemonConfig DaemonConfig::from(const FlatConfig& cfg)
{
    DaemonConfig d;
    if (auto v = cfg.get("listen")) d.listen = Endpoint::parse(*v);
    if (auto v = cfg.get("simchain")) d.simchain = Endpoint::parse(*v);
    d.snapshot_path = cfg.get_or("snapshot", d.snapshot_path);
    if (auto v = cfg.get("min_routing_fee")) d.min_routing_fee = parse_u64(*v, "min_routing_fee");
    d.host_key_path = cfg.get_or("host_key", d.host_key_path);
    d.hub_key_path = cfg.get_or("hub_key", d.hub_key_path);
    if (auto v = cfg.get("start_height")) d.start_height = parse_u64(*v, "start_height");
    if (auto v = cfg.get("fee_window")) d.fee_window = parse_u64(*v, "fee_window");
    if (d.fee_window == 0) throw ConfigError("fee_window must be positive");
    if (auto v = cfg.get("crypto_mode")) {
        try {
            d.crypto_mode = crypto::parse_crypto_mode(*v);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    d.params = cfg.get_or("params", d.params);
    params_by_name(d.params);
    if (auto v = cfg.get("restore")) d.restore = *v == "true" || *v == "1" || *v == "yes";
    return d;
}

SimchainConfig SimchainConfig::from(const FlatConfig& cfg)
{
    SimchainConfig s;
    if (auto v = cfg.get("simchain")) s.listen = Endpoint::parse(*v);
    if (auto v = cfg.get("seed")) s.seed = parse_u64(*v, "seed");
    s.params = cfg.get_or("params", s.params);
    params_by_name(s.params);
    if (auto v = cfg.get("premine")) s.premine = parse_u64(*v, "premine");
    if (auto v = cfg.get("traffic_fee_rate")) s.traffic_fee_rate = parse_u64(*v, "traffic_fee_rate");
    return s;
}

void write_file_atomic(const std::string& path, ByteView data)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write " + tmp);
        f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!f) throw ConfigError("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Bytes read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

static void write_json(const std::string& path, const nlohmann::json& j)
{
    const std::string text = j.dump(2) + "\n";
    write_file_atomic(path, ByteView(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

static nlohmann::json read_json(const std::string& path)
{
    const Bytes raw = read_file(path);
    try {
        return nlohmann::json::parse(raw.begin(), raw.end());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_keypair(const std::string& path, const crypto::KeyPair& key)
{
    write_json(path, {{"scheme", scheme_name(key.pub.scheme)},
                      {"public", to_hex(key.pub.encode())},
                      {"address", to_hex(key.pub.address())},
                      {"secret", to_hex(key.encode())}});
    std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
}

crypto::KeyPair read_keypair(const std::string& path)
{
    const nlohmann::json j = read_json(path);
    if (!j.contains("secret")) throw ConfigError(path + ": not a key pair file");
    try {
        return crypto::KeyPair::decode(from_hex(j.at("secret").get<std::string>()));
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_public_key(const std::string& path, const crypto::PublicKey& key)
{
    write_json(path, {{"scheme", scheme_name(key.scheme)}, {"public", to_hex(key.encode())}, {"address", to_hex(key.address())}});
}

crypto::PublicKey read_public_key(const std::string& path)
{
    const nlohmann::json j = read_json(path);
    try {
        return crypto::PublicKey::decode(from_hex(j.at("public").get<std::string>()));
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace routee::app
