#include <chrono>
#include <cmath>
#include <thread>

#include "rebel/llm.hpp"

namespace rebel::llm {

void CompletionRequest::check() const {
    if (prompt.empty()) throw Error("completion prompt must be non-empty");
    if (!(temperature >= 0.0 && temperature <= 2.0)) throw Error("temperature must lie in [0, 2]");
    if (max_tokens < 1) throw Error("max_tokens must be positive");
}

void ProviderConfig::check() const {
    if (!(timeout_s > 0.0)) throw Error("provider timeout must be positive");
    if (retries < 0) throw Error("retry count must be non-negative");
    if (backoff_s < 0.0) throw Error("backoff must be non-negative");
    if (max_concurrency < 1 || max_concurrency > 1024) throw Error("max_concurrency must lie in [1, 1024]");
    if (endpoint.empty()) throw Error("provider endpoint must be set");
}

std::string_view llm_error_label(LlmError::Kind k) {
    switch (k) {
        case LlmError::Kind::Timeout: return "Timeout";
        case LlmError::Kind::ProviderRejected: return "ProviderRejected";
        case LlmError::Kind::Unavailable: return "Unavailable";
    }
    return "?";
}

void real_sleep(double seconds) {
    if (seconds > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

std::string with_retries(const std::function<std::string()>& attempt, int retries, double backoff_s,
                         const Sleeper& sleep) {
    for (int i = 0;; ++i) {
        try {
            return attempt();
        } catch (const TransientFailure& f) {
            if (i >= retries) {
                const auto kind = f.timeout() ? LlmError::Kind::Timeout : LlmError::Kind::Unavailable;
                throw LlmError(kind, std::string(f.what()) + " (after " + std::to_string(i + 1) + " attempts)");
            }
            sleep(backoff_s * std::ldexp(1.0, i));
        }
    }
}

StatusClass classify_status(int status) {
    if (status >= 200 && status < 300) return StatusClass::Ok;
    if (status == 408 || status == 429 || status >= 500) return StatusClass::Transient;
    if (status >= 400) return StatusClass::Rejected;
    // 1xx/3xx are not expected from a completion endpoint
    return StatusClass::Transient;
}

CannedProvider::CannedProvider(std::vector<std::string> responses) : responses_(std::move(responses)) {
    if (responses_.empty()) responses_.emplace_back();
}

std::string CannedProvider::complete(const CompletionRequest& request) {
    request.check();
    std::lock_guard lock(mutex_);
    const auto i = std::min(calls_, responses_.size() - 1);
    ++calls_;
    return responses_[i];
}

std::size_t CannedProvider::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

}  // namespace rebel::llm
