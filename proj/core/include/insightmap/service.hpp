#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "insightmap/errors.hpp"

namespace insightmap {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  ///< 0 binds an ephemeral port
    std::filesystem::path data_dir = "insightmap-data";
    /// Value of Access-Control-Allow-Origin; empty disables CORS headers.
    std::string cors_origin = "*";
};

class ServiceError : public Error {
public:
    using Error::Error;
};

/// HTTP JSON API under /api/v1. Datasets and catalogs are persisted in
/// data_dir under content-hash ids; mining runs on background threads.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds the listening socket and returns the port. Throws ServiceError
    /// when the port is taken or data_dir is not writable.
    int bind();
    /// Serves until stop(); bind() must have succeeded. Returns at once if
    /// stop() was already called.
    void run();
    /// Safe from any thread, including a signal-waiting thread.
    void stop();
    /// Blocks until no mining job is queued or running.
    void wait_for_jobs();

    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace insightmap
