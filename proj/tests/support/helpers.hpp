#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgqa/errors.hpp"
#include "kgqa/kg.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/prompts.hpp"

#ifndef KGQA_TEST_DATA_DIR
#define KGQA_TEST_DATA_DIR "tests/data"
#endif
#ifndef KGQA_PROMPT_DIR
#define KGQA_PROMPT_DIR "prompts"
#endif

namespace kgqa::testing {

inline std::string data_path(const std::string& name) {
    return std::string(KGQA_TEST_DATA_DIR) + "/" + name;
}

inline const TemplateSet& templates() {
    static TemplateSet set = TemplateSet::load(KGQA_PROMPT_DIR);
    return set;
}

inline KnowledgeGraph graph_from(std::vector<Triple> triples) {
    return KnowledgeGraph::from_triples(std::move(triples));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Unique scratch directory per test run, removed on destruction.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        static std::atomic<int> counter{0};
        dir_ = base / ("kgqa_test_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        std::string p = path(name);
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }

private:
    std::filesystem::path dir_;
};

// Fails with TransportError a fixed number of times, then delegates.
class FlakyBackend : public LlmBackend {
public:
    FlakyBackend(LlmBackend& inner, int failures) : inner_(inner), failures_left_(failures) {}

    CompletionResult complete(const CompletionRequest& request) override {
        if (failures_left_ > 0) {
            --failures_left_;
            throw TransportError("injected transport failure");
        }
        return inner_.complete(request);
    }
    std::string name() const override { return "flaky"; }

private:
    LlmBackend& inner_;
    int failures_left_;
};

// Answers every request of a kind with fixed text; useful for single-module
// tests that do not care about rule matching.
class CannedBackend : public LlmBackend {
public:
    CompletionResult complete(const CompletionRequest& request) override {
        return {responses_.at(static_cast<std::size_t>(request.kind)), 10, 5};
    }
    std::string name() const override { return "canned"; }

    void set(PromptKind kind, std::string text) {
        responses_[static_cast<std::size_t>(kind)] = std::move(text);
    }

private:
    std::array<std::string, kPromptKindCount> responses_ = {
        "a generated narrative", "a trajectory summary", "an exploration pattern", "[]", "{}"};
};

}  // namespace kgqa::testing
