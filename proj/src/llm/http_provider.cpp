#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "rebel/llm.hpp"

namespace rebel::llm {
namespace {

using nlohmann::json;

struct SlotGuard {
    std::counting_semaphore<1024>& sem;
    explicit SlotGuard(std::counting_semaphore<1024>& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
};

json post_json(const ProviderConfig& cfg, std::string_view resource, const json& body) {
    const auto [base, path] = split_endpoint(cfg.endpoint, resource);
    httplib::Client client(base);
    const auto secs = static_cast<time_t>(cfg.timeout_s);
    const auto usecs = static_cast<time_t>((cfg.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!cfg.api_key_env.empty()) {
        if (const char* key = std::getenv(cfg.api_key_env.c_str()); key != nullptr && *key != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        const auto err = res.error();
        const bool timeout = err == httplib::Error::Read || err == httplib::Error::Write ||
                             err == httplib::Error::ConnectionTimeout;
        throw TransientFailure("request to " + base + path + " failed: " + httplib::to_string(err), timeout);
    }
    switch (classify_status(res->status)) {
        case StatusClass::Ok: break;
        case StatusClass::Transient:
            throw TransientFailure("HTTP " + std::to_string(res->status) + " from " + base + path,
                                   res->status == 408);
        case StatusClass::Rejected:
            throw LlmError(LlmError::Kind::ProviderRejected,
                           "HTTP " + std::to_string(res->status) + " from " + base + path + ": " + res->body,
                           res->status);
    }
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw TransientFailure(std::string("malformed response body: ") + e.what(), false);
    }
}

}  // namespace

std::pair<std::string, std::string> split_endpoint(std::string_view endpoint, std::string_view resource) {
    const auto scheme = endpoint.find("://");
    const auto slash = endpoint.find('/', scheme == std::string_view::npos ? 0 : scheme + 3);
    std::string base(endpoint.substr(0, slash));
    std::string prefix(slash == std::string_view::npos ? std::string_view{} : endpoint.substr(slash));
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    if (!prefix.ends_with("/v1")) prefix += "/v1";
    return {base, prefix + "/" + std::string(resource)};
}

HttpChatProvider::HttpChatProvider(ProviderConfig cfg, Sleeper sleep)
    : cfg_(std::move(cfg)), sleep_(std::move(sleep)) {
    cfg_.check();
    slots_ = std::make_unique<std::counting_semaphore<1024>>(static_cast<std::ptrdiff_t>(cfg_.max_concurrency));
}

std::string HttpChatProvider::attempt(const CompletionRequest& request) {
    const json body = {
        {"model", request.model.empty() ? cfg_.model : request.model},
        {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    const json reply = post_json(cfg_, "chat/completions", body);
    try {
        const auto& content = reply.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string{} : content.get<std::string>();
    } catch (const json::exception& e) {
        throw TransientFailure(std::string("unexpected completion payload: ") + e.what(), false);
    }
}

std::string HttpChatProvider::complete(const CompletionRequest& request) {
    request.check();
    SlotGuard guard(*slots_);
    return with_retries([&] { return attempt(request); }, cfg_.retries, cfg_.backoff_s, sleep_);
}

HttpEmbedder::HttpEmbedder(ProviderConfig cfg, Sleeper sleep) : cfg_(std::move(cfg)), sleep_(std::move(sleep)) {
    cfg_.check();
}

retrieval::Embedding HttpEmbedder::embed(std::string_view text) {
    const json body = {{"model", cfg_.embedding_model}, {"input", std::string(text)}};
    auto values = [&] {
        std::vector<double> out;
        with_retries(
            [&] {
                const json reply = post_json(cfg_, "embeddings", body);
                try {
                    out = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
                } catch (const json::exception& e) {
                    throw TransientFailure(std::string("unexpected embedding payload: ") + e.what(), false);
                }
                return std::string{};
            },
            cfg_.retries, cfg_.backoff_s, sleep_);
        return out;
    }();
    if (values.empty()) throw LlmError(LlmError::Kind::ProviderRejected, "embedding endpoint returned no values");
    return retrieval::Embedding(std::move(values));
}

}  // namespace rebel::llm
