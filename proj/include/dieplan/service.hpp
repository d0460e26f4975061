#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "dieplan/error.hpp"
#include "dieplan/session.hpp"

namespace dieplan {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    PipelineConfig default_config;
    /// One `<session>.json` bundle per session when set; existing bundles are loaded on start.
    std::optional<std::filesystem::path> store_dir;
};

/// HTTP status for a library error code.
int http_status(ErrorCode code);

/// `{"error": {"code": ..., "message": ...}}`
std::string error_body(ErrorCode code, std::string_view message);

/// Routing and session store, independent of any socket layer.
class Service {
public:
    explicit Service(ServiceOptions options = {});

    HttpResponse handle(std::string_view method, std::string_view path,
                        const std::multimap<std::string, std::string>& query, std::string_view body);

    std::size_t session_count() const;

    /// Blocks serving HTTP on `host:port` until `stop()` is called from another thread.
    void serve(const std::string& host, int port);
    void stop();

private:
    std::shared_ptr<AnalysisSession> find(const std::string& id) const;
    void persist(const AnalysisSession& session) const;

    HttpResponse create_session(std::string_view body);
    HttpResponse overrides(AnalysisSession& session, std::string_view body);

    ServiceOptions options_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<AnalysisSession>> sessions_;
    std::size_t next_id_ = 1;
    std::mutex server_mutex_;
    std::shared_ptr<void> server_;
    bool stop_requested_ = false;
};

/// `DIEPLAN_PORT` when set and valid, 8080 otherwise.
int default_port();

}  // namespace dieplan
