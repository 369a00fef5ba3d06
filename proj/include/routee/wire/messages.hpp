// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <routee/chain/block.hpp>
#include <routee/crypto/signature.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace routee::wire {

/// Outcome codes shared by the hub, the wire protocol and the CLI exit status.
enum class Status : uint16_t {
    ok = 0,
    auth_failure = 1,
    stale_request = 2,
    already_registered = 3,
    unknown_user = 4,
    not_in_chain = 5,
    monotonicity_violation = 6,
    insufficient_balance = 7,
    receiver_not_ready = 8,
    fee_below_minimum = 9,
    fee_too_low = 10,
    invalid_amount = 11,
    host_auth_failure = 12,
    not_on_tip = 13,
    invalid_block = 14,
    terminated = 15,
    not_yet = 16,
    malformed_frame = 17,
    unknown_type = 18,
    init_failure = 19,
    handshake_failure = 20,
    session_error = 21,
    io_error = 22,
    internal = 23,
};

std::string_view to_string(Status s);

/// Protocol error carrying a Status; thrown by hub operations and codecs.
class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Status status, const std::string& what)
        : std::runtime_error(what.empty() ? std::string(to_string(status)) : what), status_(status)
    {
    }
    explicit ProtocolError(Status status) : ProtocolError(status, {}) {}
    Status status() const { return status_; }

private:
    Status status_;
};

// ---- requests ---------------------------------------------------------------

struct AddUser {
    crypto::PublicKey public_key;
    Address settle_address{};
    bool operator==(const AddUser&) const = default;
};

struct AddDeposit {
    Address user{};
    uint64_t nonce = 0;
    bool operator==(const AddDeposit&) const = default;
};

struct UpdateBoundary {
    Address user{};
    uint64_t nonce = 0;
    Height block_number = 0;
    Hash256 block_hash{};
    bool operator==(const UpdateBoundary&) const = default;
};

struct PaymentEntry {
    Address receiver{};
    Amount amount = 0;
    Amount routing_fee = 0;
    bool operator==(const PaymentEntry&) const = default;
};

struct Payment {
    Address sender{};
    uint64_t nonce = 0;
    std::vector<PaymentEntry> batch;
    bool operator==(const Payment&) const = default;
};

struct Settle {
    Address user{};
    uint64_t nonce = 0;
    Amount amount = 0;
    Amount fee = 0;
    bool operator==(const Settle&) const = default;
};

struct QueryUser {
    Address user{};
    uint64_t nonce = 0;
    bool operator==(const QueryUser&) const = default;
};

struct QueryLatestBlock {
    bool operator==(const QueryLatestBlock&) const = default;
};

struct QueryLedger {
    bool operator==(const QueryLedger&) const = default;
};

struct InsertBlock {
    uint64_t host_nonce = 0;
    Block block;
    bool operator==(const InsertBlock&) const = default;
};

struct Terminate {
    uint64_t host_nonce = 0;
    bool operator==(const Terminate&) const = default;
};

struct BuildSettlement {
    uint64_t host_nonce = 0;
    bool operator==(const BuildSettlement&) const = default;
};

/// Host fetches the outstanding settlement transaction for broadcast.
struct GetPlan {
    uint64_t host_nonce = 0;
    bool operator==(const GetPlan&) const = default;
};

struct TakeSnapshot {
    uint64_t host_nonce = 0;
    bool operator==(const TakeSnapshot&) const = default;
};

using RequestBody = std::variant<AddUser, AddDeposit, UpdateBoundary, Payment, Settle, QueryUser, QueryLatestBlock,
                                 QueryLedger, InsertBlock, Terminate, BuildSettlement, GetPlan, TakeSnapshot>;

/// Message type tags of the inner canonical encoding.
enum class MessageType : uint8_t {
    add_user = 0x01,
    add_deposit = 0x02,
    update_boundary = 0x03,
    payment = 0x04,
    settle = 0x05,
    query_user = 0x06,
    query_latest_block = 0x07,
    query_ledger = 0x08,
    insert_block = 0x10,
    terminate = 0x11,
    build_settlement = 0x12,
    get_plan = 0x13,
    take_snapshot = 0x14,
    response = 0x80,
};

MessageType type_of(const RequestBody& body);
bool requires_user_signature(const RequestBody& body);
bool requires_host_signature(const RequestBody& body);

/// A request body plus the signature over its signing bytes (empty for unsigned requests).
struct Request {
    RequestBody body;
    Bytes signature;
    bool operator==(const Request&) const = default;
};

/// Canonical encoding of the body alone: type tag then fields, fixed-width big-endian.
Bytes encode_body(const RequestBody& body);
/// Domain-separated bytes the client signs.
Bytes signing_bytes(const RequestBody& body);

Bytes encode_request(const Request& request);
/// Throws ProtocolError(malformed_frame | unknown_type).
Request decode_request(ByteView raw);

Request make_signed(RequestBody body, const crypto::KeyPair& key);

// ---- responses --------------------------------------------------------------

struct Response {
    Status status = Status::ok;
    std::string message;
    Bytes payload;
    bool operator==(const Response&) const = default;
};

/// Throws ProtocolError when the status is not ok.
const Response& expect_ok(const Response& r);

Bytes encode_response(const Response& r);
Response decode_response(ByteView raw);

} // namespace routee::wire
