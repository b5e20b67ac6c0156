#pragma once

// Text-completion providers: an OpenAI-compatible HTTP client, deterministic
// stand-ins for offline runs, transcript record/replay, and the greedy
// preference-aware allocator used as stub payload and fallback.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "rebel/core.hpp"
#include "rebel/retrieval.hpp"
#include "rebel/sim.hpp"

namespace rebel::llm {

inline constexpr double kInferenceTemperature = 0.2;
inline constexpr double kRuleTemperature = 0.7;

struct CompletionRequest {
    std::string prompt;
    double temperature = kInferenceTemperature;
    int max_tokens = 1024;
    std::string model;

    /// Throws Error on an empty prompt, temperature outside [0,2] or max_tokens < 1.
    void check() const;
    friend bool operator==(const CompletionRequest&, const CompletionRequest&) = default;
};

struct ProviderConfig {
    std::string endpoint = "http://127.0.0.1:8000";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string model = "gpt-4o-mini";
    std::string embedding_model = "text-embedding-3-small";
    double timeout_s = 60.0;
    int retries = 2;
    double backoff_s = 0.5;  // first retry delay, doubled per attempt
    std::size_t max_concurrency = 4;

    void check() const;
};

class LlmError : public Error {
public:
    enum class Kind { Timeout, ProviderRejected, Unavailable };
    LlmError(Kind kind, std::string message, int status = 0)
        : Error(std::move(message)), kind_(kind), status_(status) {}
    Kind kind() const { return kind_; }
    int status() const { return status_; }

private:
    Kind kind_;
    int status_;
};

std::string_view llm_error_label(LlmError::Kind k);

/// Raised by a single attempt for failures worth retrying.
class TransientFailure : public Error {
public:
    TransientFailure(std::string message, bool timeout) : Error(std::move(message)), timeout_(timeout) {}
    bool timeout() const { return timeout_; }

private:
    bool timeout_;
};

using Sleeper = std::function<void(double seconds)>;
void real_sleep(double seconds);

/// Runs `attempt` up to retries+1 times. TransientFailure triggers a backoff
/// and another try; any other exception propagates at once. When retries run
/// out the last failure decides between Timeout and Unavailable.
std::string with_retries(const std::function<std::string()>& attempt, int retries, double backoff_s,
                         const Sleeper& sleep = real_sleep);

/// HTTP status policy: 2xx ok, 408/429/5xx transient, other 4xx rejected.
enum class StatusClass { Ok, Transient, Rejected };
StatusClass classify_status(int status);

class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// POST {endpoint}/v1/chat/completions with a single user message.
class HttpChatProvider final : public Provider {
public:
    explicit HttpChatProvider(ProviderConfig cfg, Sleeper sleep = real_sleep);
    std::string complete(const CompletionRequest& request) override;
    std::string name() const override { return "http:" + cfg_.endpoint; }

private:
    std::string attempt(const CompletionRequest& request);

    ProviderConfig cfg_;
    Sleeper sleep_;
    std::unique_ptr<std::counting_semaphore<1024>> slots_;
};

/// POST {endpoint}/v1/embeddings; the returned vector is L2-normalized.
class HttpEmbedder final : public retrieval::Embedder {
public:
    explicit HttpEmbedder(ProviderConfig cfg, Sleeper sleep = real_sleep);
    retrieval::Embedding embed(std::string_view text) override;
    std::string name() const override { return "http-embed:" + cfg_.embedding_model; }

private:
    ProviderConfig cfg_;
    Sleeper sleep_;
};

/// Splits "http://host:port/prefix" into the scheme+authority and the full
/// API path for `resource` ("chat/completions", "embeddings").
std::pair<std::string, std::string> split_endpoint(std::string_view endpoint, std::string_view resource);

/// Reads the prompt's structure and answers like a cooperative model.
class StubProvider final : public Provider {
public:
    enum class Mode {
        Heuristic,     // plans rendered from heuristic_allocate
        CopyExemplar,  // plan of an exemplar with an identical scenario, else Heuristic
        Prose,         // commentary without any assignment line
        Empty,
    };
    explicit StubProvider(Mode mode = Mode::Heuristic, sim::SimConfig model = {});
    std::string complete(const CompletionRequest& request) override;
    std::string name() const override;

    std::size_t calls() const;

private:
    Mode mode_;
    sim::SimConfig model_;
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

/// Canned bullet rules for one objective, as the stub emits them.
const std::vector<std::string>& canned_rules(Objective o);

/// Returns responses in order, repeating the last one.
class CannedProvider final : public Provider {
public:
    explicit CannedProvider(std::vector<std::string> responses);
    std::string complete(const CompletionRequest& request) override;
    std::string name() const override { return "canned"; }
    std::size_t calls() const;

private:
    std::vector<std::string> responses_;
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

// ---------------------------------------------------------------------------
// Transcripts: one JSON object per exchange.

std::string transcript_line(const CompletionRequest& request, const std::string& response);

class RecordingProvider final : public Provider {
public:
    RecordingProvider(Provider& inner, std::filesystem::path path);
    std::string complete(const CompletionRequest& request) override;
    std::string name() const override { return "record(" + inner_.name() + ")"; }

private:
    Provider& inner_;
    std::filesystem::path path_;
    std::mutex mutex_;
};

/// Answers from a transcript. Repeated identical requests consume recorded
/// responses in order, then keep returning the last. Unknown requests raise
/// LlmError(Unavailable).
class ReplayProvider final : public Provider {
public:
    explicit ReplayProvider(const std::filesystem::path& path);
    std::string complete(const CompletionRequest& request) override;
    std::string name() const override { return "replay"; }

private:
    struct Slot {
        std::vector<std::string> responses;
        std::size_t next = 0;
    };
    std::map<std::string, Slot> slots_;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------

/// Deterministic greedy allocation steered by the dominant objective, or by
/// weighted normalized proxies when no objective dominates. Throws Error if
/// the scenario is not runnable.
ItaPlan heuristic_allocate(const MissionScenario& scenario, const PreferenceVector& prefs,
                           const sim::SimConfig& model = {});

}  // namespace rebel::llm
