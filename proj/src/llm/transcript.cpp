#include <fstream>

#include "json.hpp"
#include "rebel/llm.hpp"

namespace rebel::llm {
namespace {

using nlohmann::json;

std::string request_key(const CompletionRequest& r) {
    return json{{"prompt", r.prompt}, {"temperature", r.temperature}, {"max_tokens", r.max_tokens}, {"model", r.model}}
        .dump();
}

}  // namespace

std::string transcript_line(const CompletionRequest& request, const std::string& response) {
    return json{{"prompt", request.prompt},
                {"temperature", request.temperature},
                {"max_tokens", request.max_tokens},
                {"model", request.model},
                {"response", response}}
        .dump();
}

RecordingProvider::RecordingProvider(Provider& inner, std::filesystem::path path)
    : inner_(inner), path_(std::move(path)) {}

std::string RecordingProvider::complete(const CompletionRequest& request) {
    auto response = inner_.complete(request);
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw Error("cannot append to transcript " + path_.string());
    out << transcript_line(request, response) << '\n';
    return response;
}

ReplayProvider::ReplayProvider(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open transcript " + path.string());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            const auto j = json::parse(line);
            CompletionRequest r{j.at("prompt").get<std::string>(), j.at("temperature").get<double>(),
                                j.at("max_tokens").get<int>(), j.at("model").get<std::string>()};
            slots_[request_key(r)].responses.push_back(j.at("response").get<std::string>());
        } catch (const json::exception& e) {
            throw Error(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
}

std::string ReplayProvider::complete(const CompletionRequest& request) {
    request.check();
    std::lock_guard lock(mutex_);
    auto it = slots_.find(request_key(request));
    if (it == slots_.end()) throw LlmError(LlmError::Kind::Unavailable, "request not present in transcript");
    auto& slot = it->second;
    const auto i = std::min(slot.next, slot.responses.size() - 1);
    if (slot.next < slot.responses.size()) ++slot.next;
    return slot.responses[i];
}

}  // namespace rebel::llm
