#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kgqa/errors.hpp"
#include "kgqa/prompts.hpp"

namespace kgqa {

struct CompletionRequest {
    PromptKind kind;
    std::string rendered_text;
};

struct CompletionResult {
    std::string text;
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
};

// Per-question accounting of LLM calls and token consumption.
// charge() is atomic; one charge per successful completion.
class BudgetLedger {
public:
    BudgetLedger() = default;
    explicit BudgetLedger(std::string question_id) : question_id_(std::move(question_id)) {}

    void charge(const CompletionResult& result) {
        std::lock_guard lock(mutex_);
        ++llm_calls_;
        total_tokens_ += result.prompt_tokens + result.completion_tokens;
    }

    std::uint64_t llm_calls() const {
        std::lock_guard lock(mutex_);
        return llm_calls_;
    }
    std::uint64_t total_tokens() const {
        std::lock_guard lock(mutex_);
        return total_tokens_;
    }
    const std::string& question_id() const { return question_id_; }

private:
    std::string question_id_;
    mutable std::mutex mutex_;
    std::uint64_t llm_calls_ = 0;
    std::uint64_t total_tokens_ = 0;
};

// A scripted request with no matching rule. Carries the prompt kind and a
// stable fingerprint of the rendered text for diagnosis.
class UnmatchedRequest : public BackendError {
public:
    UnmatchedRequest(PromptKind kind, std::string fingerprint)
        : BackendError(std::string("no scripted rule matches ") + kind_name(kind) +
                       " request (fingerprint " + fingerprint + ")"),
          kind_(kind),
          fingerprint_(std::move(fingerprint)) {}

    PromptKind kind() const { return kind_; }
    const std::string& fingerprint() const { return fingerprint_; }

private:
    PromptKind kind_;
    std::string fingerprint_;
};

// FNV-1a over the rendered prompt, hex-encoded.
std::string prompt_fingerprint(const std::string& rendered_text);

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual CompletionResult complete(const CompletionRequest& request) = 0;
    virtual std::string name() const = 0;
};

// Deterministic backend driven by an ordered rule list. The first rule whose
// kind matches and whose substrings all occur in the rendered prompt fires.
// Safe for concurrent use (rules are immutable after construction).
class ScriptedBackend : public LlmBackend {
public:
    struct Rule {
        PromptKind kind;
        std::vector<std::string> contains;
        std::string response;
        std::uint64_t prompt_tokens = 0;
        std::uint64_t completion_tokens = 0;
    };

    explicit ScriptedBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {}

    // Rules file: {"rules": [{"kind", "contains": [...], "response",
    // "prompt_tokens", "completion_tokens"}, ...]} — or a bare array.
    static ScriptedBackend from_file(const std::string& path);
    static ScriptedBackend from_json_text(const std::string& json_text);

    CompletionResult complete(const CompletionRequest& request) override;
    std::string name() const override { return "scripted"; }

    const std::vector<Rule>& rules() const { return rules_; }

private:
    std::vector<Rule> rules_;
};

struct RetryPolicy {
    int max_retries = 3;          // retries after the first attempt
    int initial_backoff_ms = 200; // doubled per retry
};

// Chat-completions-style HTTP backend: JSON POST of a single user message at
// temperature 0 against {base_url}{api_path}. 429/5xx and transport failures
// raise TransportError (retryable); other non-200s raise BackendError.
// Responses without usage data count as 0 tokens, with a one-time warning.
class HttpBackend : public LlmBackend {
public:
    struct Options {
        std::string base_url;   // e.g. http://localhost:8000
        std::string api_path = "/v1/chat/completions";
        std::string model;
        std::string api_key;    // sent as Bearer auth when non-empty
        int timeout_seconds = 120;
    };

    explicit HttpBackend(Options options);

    CompletionResult complete(const CompletionRequest& request) override;
    std::string name() const override { return "live"; }

private:
    Options options_;
    std::once_flag usage_warning_once_;
};

// Issues the request, retrying transient transport failures with exponential
// backoff. Exactly one ledger charge on success — retries are never charged.
// Throws BackendUnavailable once the retry budget is spent.
CompletionResult complete(LlmBackend& backend, const CompletionRequest& request,
                          BudgetLedger& ledger, const RetryPolicy& retry = {});

// Everything one reasoning session needs to talk to its model: the backend,
// the template set, the retry policy, and the session's ledger. Also counts
// the re-asks spent recovering from malformed completions.
class Gateway {
public:
    Gateway(LlmBackend& backend, const TemplateSet& templates, BudgetLedger& ledger,
            RetryPolicy retry = {})
        : backend_(&backend), templates_(&templates), ledger_(&ledger), retry_(retry) {}

    // render_prompt + complete, charged to the session ledger.
    CompletionResult run(PromptKind kind, const FieldMap& fields);

    const TemplateSet& templates() const { return *templates_; }
    BudgetLedger& ledger() { return *ledger_; }

    void count_reask() { ++reasks_; }
    std::uint64_t reasks() const { return reasks_; }

private:
    LlmBackend* backend_;
    const TemplateSet* templates_;
    BudgetLedger* ledger_;
    RetryPolicy retry_;
    std::uint64_t reasks_ = 0;
};

}  // namespace kgqa
