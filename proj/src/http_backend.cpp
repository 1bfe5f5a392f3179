#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "srouter/backends.hpp"

namespace srouter {

namespace {

using nlohmann::json;

struct SplitUrl {
    std::string base;  // scheme://host:port
    std::string path;  // /v1/...
};

SplitUrl split_url(const std::string& url) {
    const size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw BackendError(BackendErrorKind::Transport, "malformed endpoint URL: " + url);
    }
    const size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) return {url, "/"};
    return {url.substr(0, path), url.substr(path)};
}

// "choices.0.message.content" -> nested lookup, numeric parts index arrays
const json* walk_field_path(const json& j, const std::string& path) {
    const json* cur = &j;
    size_t pos = 0;
    while (pos <= path.size()) {
        size_t dot = path.find('.', pos);
        const std::string part =
            path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        pos = dot == std::string::npos ? path.size() + 1 : dot + 1;
        if (part.empty()) continue;
        if (cur->is_array()) {
            char* end = nullptr;
            const long idx = std::strtol(part.c_str(), &end, 10);
            if (end == part.c_str() || *end != '\0' || idx < 0 ||
                idx >= static_cast<long>(cur->size())) {
                return nullptr;
            }
            cur = &(*cur)[static_cast<size_t>(idx)];
        } else if (cur->is_object()) {
            auto it = cur->find(part);
            if (it == cur->end()) return nullptr;
            cur = &*it;
        } else {
            return nullptr;
        }
    }
    return cur;
}

httplib::Client make_client(const std::string& base, double timeout_seconds) {
    httplib::Client cli(base);
    const auto timeout =
        std::chrono::milliseconds(static_cast<int64_t>(timeout_seconds * 1000.0));
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    return cli;
}

}  // namespace

SolveResponse llm_solve(const SolveRequest& req, const LlmBackendConfig& cfg) {
    const SplitUrl url = split_url(cfg.endpoint);
    auto cli = make_client(url.base, cfg.timeout_seconds);

    httplib::Headers headers;
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    json body;
    body["model"] = cfg.model;
    body["messages"] = json::array({{{"role", "user"}, {"content", build_solve_prompt(req)}}});
    body["temperature"] = cfg.temperature;
    const std::string payload = body.dump();

    const auto start = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.backoff_base_ms << (attempt - 1)));
        }
        auto res = cli.Post(url.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;  // retryable
        }
        if (res->status >= 500) {
            last_error = "server error: HTTP " + std::to_string(res->status);
            continue;  // retryable
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendError(BackendErrorKind::HttpStatus,
                               "backend returned HTTP " + std::to_string(res->status));
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded()) {
            throw BackendError(BackendErrorKind::EmptyCompletion,
                               "backend response is not valid JSON");
        }
        const json* field = walk_field_path(reply, cfg.completion_field);
        if (!field || !field->is_string() || field->get<std::string>().empty()) {
            throw BackendError(BackendErrorKind::EmptyCompletion,
                               "no completion text at field path \"" + cfg.completion_field +
                                   "\"");
        }
        SolveResponse out;
        out.raw_text = field->get<std::string>();
        out.parsed_answer = parse_answer(out.raw_text);
        out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        return out;
    }
    throw BackendError(BackendErrorKind::Transport,
                       "backend unreachable after " + std::to_string(cfg.max_retries + 1) +
                           " attempts (" + last_error + ")");
}

bool backend_ping(const LlmBackendConfig& cfg) {
    const SplitUrl url = split_url(cfg.endpoint);
    auto cli = make_client(url.base, cfg.timeout_seconds);
    auto res = cli.Get("/");
    return static_cast<bool>(res);
}

}  // namespace srouter
