#pragma once

#include <httplib.h>

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include "pdnet/network_store.hpp"

namespace pdnet {

// Read-only HTTP front end over a network snapshot. Requests are served from
// an immutable snapshot object; POST /admin/reload re-reads the snapshot file
// and swaps it in atomically while in-flight readers finish on the old one.
class DiscoveryService {
  public:
    explicit DiscoveryService(std::filesystem::path snapshot_path);

    void reload();

    // Blocking; returns false if the address cannot be bound.
    bool listen(const std::string& host, int port);

    // Test support: bind to an ephemeral port, then listen on a thread.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

  private:
    std::shared_ptr<const NetworkSnapshot> snapshot() const;
    void install_routes();

    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::shared_ptr<const NetworkSnapshot> snap_;
    httplib::Server server_;
};

}  // namespace pdnet
