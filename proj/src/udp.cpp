// Copyright 2026 dynapitch authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dynapitch/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace dynapitch::net {

namespace {

sockaddr_in make_addr(const char* host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host, &addr.sin_addr) != 1) {
    throw std::runtime_error(std::string("bad IPv4 address: ") + host);
  }
  return addr;
}

}  // namespace

UdpCommandReceiver::UdpCommandReceiver(uint16_t port, CommandQueue& queue)
    : queue_(queue) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) throw std::runtime_error("socket() failed");

  const int reuse = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &reuse, sizeof(reuse));

  // Wake the thread from recv periodically to check the stop flag.
  timeval timeout{};
  timeout.tv_usec = 100000;
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof(timeout));

  auto addr = make_addr("0.0.0.0", port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    throw std::runtime_error("bind() failed on port " + std::to_string(port));
  }
  thread_ = std::thread([this] { run(); });
}

UdpCommandReceiver::~UdpCommandReceiver() {
  stop_.store(true);
  if (thread_.joinable()) thread_.join();
  if (fd_ >= 0) ::close(fd_);
}

void UdpCommandReceiver::run() {
  std::array<uint8_t, 2048> buf;
  while (!stop_.load()) {
    const ssize_t got = ::recv(fd_, buf.data(), buf.size(), 0);
    if (got < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
      break;
    }
    const auto decoded =
        decode_command({buf.data(), static_cast<size_t>(got)});
    if (const auto* cmd = std::get_if<RobotCommand>(&decoded)) {
      queue_.push(*cmd);
    } else {
      rejected_.fetch_add(1);
    }
  }
}

UdpVisionSender::UdpVisionSender(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) throw std::runtime_error("socket() failed");
  auto addr = make_addr(host.c_str(), port);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    throw std::runtime_error("connect() failed for vision sink");
  }
}

UdpVisionSender::~UdpVisionSender() {
  if (fd_ >= 0) ::close(fd_);
}

void UdpVisionSender::send(const VisionFrame& frame) {
  const auto bytes = encode_vision(frame);
  ::send(fd_, bytes.data(), bytes.size(), 0);
}

}  // namespace dynapitch::net
