// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/wire/client.hpp>

namespace routee::wire {

void LoopbackChannel::send(const Bytes& raw)
{
    if (auto reply = service_.handle_frame(conn_, raw)) inbox_.push_back(std::move(*reply));
}

Bytes LoopbackChannel::receive()
{
    if (inbox_.empty()) throw ProtocolError(Status::io_error, "no reply");
    Bytes b = std::move(inbox_.front());
    inbox_.pop_front();
    return b;
}

HubClient::HubClient(FrameChannel& channel, crypto::PublicKey hub_key) : channel_(channel), hub_key_(std::move(hub_key)) {}

void HubClient::handshake()
{
    ClientHandshake hs(hub_key_);
    channel_.send(encode_frame(FrameType::handshake_init, hs.init_payload()));
    Frame reply = decode_frame(channel_.receive());
    if (reply.type == FrameType::error) {
        Response r = decode_response(reply.payload);
        throw ProtocolError(r.status, r.message);
    }
    if (reply.type != FrameType::handshake_ack) throw ProtocolError(Status::handshake_failure, "expected handshake-ack");
    session_.emplace(hs.finish(reply.payload));
}

Response HubClient::call(const Request& req)
{
    if (!session_) throw ProtocolError(Status::session_error, "not connected");
    channel_.send(encode_frame(FrameType::envelope, session_->seal(encode_request(req)).encode()));
    Frame reply = decode_frame(channel_.receive());
    if (reply.type == FrameType::error) {
        session_.reset();
        return decode_response(reply.payload);
    }
    if (reply.type != FrameType::envelope) {
        session_.reset();
        throw ProtocolError(Status::session_error, "unexpected frame type");
    }
    try {
        return decode_response(session_->open(Envelope::decode(reply.payload)));
    } catch (const ProtocolError&) {
        session_.reset();
        throw;
    }
}

} // namespace routee::wire
