#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pdnet/ingestion.hpp"
#include "pdnet/model.hpp"

namespace pdnet {

class CompletionClient {
  public:
    virtual ~CompletionClient() = default;

    // Returns the raw completion text for a prompt. Implementations must be
    // safe to call from multiple worker threads.
    virtual std::string complete(const std::string& prompt) = 0;
};

// Serves completions from a directory of fixture files, one per prompt. The
// filename is the 16-hex-digit FNV-1a hash of the exact prompt text; a missing
// fixture is an error so tests can never fall through to a live endpoint.
class ReplayClient : public CompletionClient {
  public:
    explicit ReplayClient(std::filesystem::path dir);
    std::string complete(const std::string& prompt) override;

    static std::string fixture_name(const std::string& prompt);

  private:
    std::filesystem::path dir_;
};

// Minimal chat-completion HTTP backend. Configuration comes from the
// environment: PDNET_API_BASE (endpoint base URL), PDNET_API_KEY (bearer
// token), PDNET_MODEL (model name).
class RemoteClient : public CompletionClient {
  public:
    RemoteClient(std::string base_url, std::string api_key, std::string model,
                 int min_interval_ms = 0);
    static std::unique_ptr<RemoteClient> from_env();
    std::string complete(const std::string& prompt) override;

  private:
    std::string base_url_;
    std::string api_key_;
    std::string model_;
    int min_interval_ms_;
    std::mutex mu_;
    std::chrono::steady_clock::time_point last_call_{};
};

// Scripted responses for tests; falls back to `default_response` when the
// script is exhausted. Records every prompt it sees.
class MockClient : public CompletionClient {
  public:
    explicit MockClient(std::string default_response = "[]");
    void push_response(std::string response);
    std::string complete(const std::string& prompt) override;
    std::vector<std::string> prompts() const;

  private:
    mutable std::mutex mu_;
    std::deque<std::string> script_;
    std::string default_response_;
    std::vector<std::string> prompts_;
};

struct AgentStep {
    std::string purpose;  // "summarize" | "select"
    std::string prompt;
    std::string output;
};

struct ExtractionRun {
    std::string paper_id;
    Strategy strategy = Strategy::truncated_sections;
    std::string prompt_text;
    std::string raw_output;
    std::string repaired_output;
    bool parse_ok = false;
    std::size_t description_count = 0;
    std::size_t estimated_cost_tokens = 0;
    std::string error;  // empty when nothing went wrong
    std::vector<AgentStep> agent_steps;
};

struct ExtractionResult {
    ExtractionRun run;
    std::vector<DatasetDescription> descriptions;
};

std::string render_prompt(const PromptPayload& payload);
std::string render_summarize_prompt(const Section& section);
std::string render_select_prompt(const std::vector<std::string>& summaries);

// Rule-based cleanup of model output: (1) drop lines that cannot be part of a
// JSON value, (2) fix escape sequences inside string literals, (3) repair
// comma placement. Inputs that already parse as strict JSON pass through
// byte-identical. Total: never throws, even when the result stays broken.
std::string repair_output(const std::string& raw);

// Accepts one object, a top-level array of objects, or a concatenated stream
// of objects. description_ids are "<paper_id>#d<i>" in output order.
std::vector<DatasetDescription> parse_descriptions(const std::string& repaired,
                                                   const std::string& paper_id);

struct ExtractOptions {
    Strategy strategy = Strategy::truncated_sections;
    std::size_t budget = 1500;
    std::vector<std::string> keywords = kDefaultSectionKeywords;
    std::size_t parallelism = 4;
};

ExtractionResult extract_paper(const Paper& paper, CompletionClient& client,
                               const ExtractOptions& options);

// Runs the worker pool over the corpus; results are in corpus order. Per-paper
// failures (transport, parse) are recorded in the run log, never fatal.
std::vector<ExtractionResult> extract_corpus(const std::vector<Paper>& papers,
                                             CompletionClient& client,
                                             const ExtractOptions& options);

}  // namespace pdnet
