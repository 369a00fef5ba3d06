// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <routee/wire/messages.hpp>
#include <routee/wire/transport.hpp>

#include <boost/asio.hpp>

#include <list>
#include <mutex>
#include <thread>

namespace routee::wire {
namespace {

using boost::asio::ip::tcp;

Bytes read_frame(tcp::socket& sock)
{
    Bytes raw(4);
    boost::asio::read(sock, boost::asio::buffer(raw));
    const uint32_t len = (uint32_t(raw[0]) << 24) | (uint32_t(raw[1]) << 16) | (uint32_t(raw[2]) << 8) | raw[3];
    if (len == 0 || len > kMaxFrameSize) throw ProtocolError(Status::malformed_frame, "bad frame length");
    raw.resize(4 + len);
    boost::asio::read(sock, boost::asio::buffer(raw.data() + 4, len));
    return raw;
}

class TcpChannel final : public FrameChannel {
public:
    TcpChannel(const std::string& host, uint16_t port) : sock_(io_)
    {
        tcp::resolver resolver(io_);
        boost::asio::connect(sock_, resolver.resolve(host, std::to_string(port)));
        sock_.set_option(tcp::no_delay(true));
    }

    void send(const Bytes& raw) override
    {
        try {
            boost::asio::write(sock_, boost::asio::buffer(raw));
        } catch (const boost::system::system_error& e) {
            throw ProtocolError(Status::io_error, e.what());
        }
    }

    Bytes receive() override
    {
        try {
            return read_frame(sock_);
        } catch (const boost::system::system_error& e) {
            throw ProtocolError(Status::io_error, e.what());
        }
    }

private:
    boost::asio::io_context io_;
    tcp::socket sock_;
};

} // namespace

std::unique_ptr<FrameChannel> tcp_connect(const std::string& host, uint16_t port)
{
    try {
        return std::make_unique<TcpChannel>(host, port);
    } catch (const boost::system::system_error& e) {
        throw ProtocolError(Status::io_error, e.what());
    }
}

struct FrameServer::Impl {
    boost::asio::io_context io;
    tcp::acceptor acceptor;
    HandlerFactory factory;
    std::thread accept_thread;
    std::mutex mu;
    std::list<std::shared_ptr<tcp::socket>> sockets;
    std::list<std::thread> workers;
    bool stopping = false;

    Impl(const std::string& bind, uint16_t port, HandlerFactory f)
        : acceptor(io, tcp::endpoint(boost::asio::ip::make_address(bind), port)), factory(std::move(f))
    {
    }

    void accept_loop()
    {
        for (;;) {
            auto sock = std::make_shared<tcp::socket>(io);
            boost::system::error_code ec;
            acceptor.accept(*sock, ec);
            std::lock_guard lock(mu);
            if (stopping) return;
            if (ec) continue;
            sock->set_option(tcp::no_delay(true), ec);
            sockets.push_back(sock);
            workers.emplace_back([this, sock] { serve(sock); });
        }
    }

    void serve(std::shared_ptr<tcp::socket> sock)
    {
        auto handler = factory();
        try {
            while (!handler->closed()) {
                Bytes raw = read_frame(*sock);
                if (auto reply = handler->on_frame(raw)) boost::asio::write(*sock, boost::asio::buffer(*reply));
            }
        } catch (const std::exception&) {
            // peer went away or sent garbage; drop the connection
        }
        boost::system::error_code ec;
        sock->shutdown(tcp::socket::shutdown_both, ec);
    }
};

FrameServer::FrameServer(const std::string& bind_address, uint16_t port, HandlerFactory factory)
{
    try {
        impl_ = std::make_unique<Impl>(bind_address, port, std::move(factory));
    } catch (const boost::system::system_error& e) {
        throw ProtocolError(Status::io_error, e.what());
    }
}

FrameServer::~FrameServer() { stop(); }

uint16_t FrameServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void FrameServer::start()
{
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

void FrameServer::stop()
{
    if (!impl_) return;
    {
        std::lock_guard lock(impl_->mu);
        if (impl_->stopping) return;
        impl_->stopping = true;
        boost::system::error_code ec;
        impl_->acceptor.cancel(ec);
        ::shutdown(impl_->acceptor.native_handle(), SHUT_RDWR);
        for (auto& s : impl_->sockets) s->shutdown(tcp::socket::shutdown_both, ec);
    }
    if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
    for (auto& w : impl_->workers)
        if (w.joinable()) w.join();
    boost::system::error_code ec;
    impl_->acceptor.close(ec);
}

} // namespace routee::wire
