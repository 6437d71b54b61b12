#include "kgqa/llm.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#ifdef KGQA_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace kgqa {

using nlohmann::json;

std::string prompt_fingerprint(const std::string& rendered_text) {
    std::uint64_t hash = 1469598103934665603ull;  // FNV offset basis
    for (unsigned char c : rendered_text) {
        hash ^= c;
        hash *= 1099511628211ull;  // FNV prime
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

// ── Scripted backend ────────────────────────────────────────────────────

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open scripted rules file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

ScriptedBackend ScriptedBackend::from_json_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scripted rules are not valid JSON: ") + e.what());
    }
    const json& list = doc.is_array() ? doc : doc.at("rules");
    if (!list.is_array()) throw ParseError("scripted rules: expected an array of rules");

    std::vector<Rule> rules;
    try {
        for (const auto& item : list) {
            Rule rule;
            rule.kind = kind_from_name(item.at("kind").get<std::string>());
            if (item.contains("contains")) {
                for (const auto& s : item.at("contains")) {
                    rule.contains.push_back(s.get<std::string>());
                }
            }
            rule.response = item.at("response").get<std::string>();
            rule.prompt_tokens = item.value("prompt_tokens", 0ull);
            rule.completion_tokens = item.value("completion_tokens", 0ull);
            rules.push_back(std::move(rule));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("scripted rule schema: ") + e.what());
    }
    return ScriptedBackend(std::move(rules));
}

CompletionResult ScriptedBackend::complete(const CompletionRequest& request) {
    for (const auto& rule : rules_) {
        if (rule.kind != request.kind) continue;
        bool all = true;
        for (const auto& needle : rule.contains) {
            if (request.rendered_text.find(needle) == std::string::npos) {
                all = false;
                break;
            }
        }
        if (!all) continue;
        return {rule.response, rule.prompt_tokens, rule.completion_tokens};
    }
    throw UnmatchedRequest(request.kind, prompt_fingerprint(request.rendered_text));
}

// ── Live backend ────────────────────────────────────────────────────────

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {
    if (options_.base_url.empty()) throw InputError("live backend requires a base URL");
    if (options_.model.empty()) throw InputError("live backend requires a model name");
#ifndef KGQA_WITH_TLS
    if (options_.base_url.rfind("https://", 0) == 0) {
        throw InputError("this build lacks TLS support; use an http:// base URL");
    }
#endif
}

CompletionResult HttpBackend::complete(const CompletionRequest& request) {
    httplib::Client client(options_.base_url);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    if (!options_.api_key.empty()) client.set_bearer_token_auth(options_.api_key);

    json body = {
        {"model", options_.model},
        {"messages", json::array({json{{"role", "user"}, {"content", request.rendered_text}}})},
        {"temperature", 0},
    };

    auto res = client.Post(options_.api_path, body.dump(), "application/json");
    if (!res) {
        throw TransportError("transport failure contacting " + options_.base_url + ": " +
                             httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
        throw TransportError("backend returned HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw BackendError("backend returned HTTP " + std::to_string(res->status) + ": " +
                           res->body);
    }

    json doc;
    try {
        doc = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("backend response is not valid JSON: ") + e.what());
    }

    CompletionResult result;
    try {
        result.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("backend response missing choices[0].message.content: ") +
                           e.what());
    }
    if (doc.contains("usage")) {
        const json& usage = doc["usage"];
        result.prompt_tokens = usage.value("prompt_tokens", 0ull);
        result.completion_tokens = usage.value("completion_tokens", 0ull);
    } else {
        std::call_once(usage_warning_once_, [] {
            std::fprintf(stderr,
                         "warning: backend reports no token usage; counting 0 tokens\n");
        });
    }
    return result;
}

// ── Retry wrapper ───────────────────────────────────────────────────────

CompletionResult complete(LlmBackend& backend, const CompletionRequest& request,
                          BudgetLedger& ledger, const RetryPolicy& retry) {
    int backoff_ms = retry.initial_backoff_ms;
    std::string last_error;
    for (int attempt = 0; attempt <= retry.max_retries; ++attempt) {
        try {
            CompletionResult result = backend.complete(request);
            ledger.charge(result);
            return result;
        } catch (const TransportError& e) {
            last_error = e.what();
            if (attempt == retry.max_retries) break;
            if (backoff_ms > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
                backoff_ms *= 2;
            }
        }
    }
    throw BackendUnavailable("backend unavailable after " + std::to_string(retry.max_retries + 1) +
                             " attempts: " + last_error);
}

CompletionResult Gateway::run(PromptKind kind, const FieldMap& fields) {
    CompletionRequest request{kind, render_prompt(*templates_, kind, fields)};
    return complete(*backend_, request, *ledger_, retry_);
}

}  // namespace kgqa
