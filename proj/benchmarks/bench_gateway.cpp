#include <benchmark/benchmark.h>

#include <random>
#include <set>
#include <sstream>

#include "kgqa/parsing.hpp"
#include "kgqa/prompts.hpp"

#ifndef KGQA_PROMPT_DIR
#define KGQA_PROMPT_DIR "prompts"
#endif

using namespace kgqa;

namespace {

const TemplateSet& templates() {
    static TemplateSet set = TemplateSet::load(KGQA_PROMPT_DIR);
    return set;
}

std::vector<std::string> relation_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        names.push_back("domain" + std::to_string(i % 7) + ".type" + std::to_string(i) +
                        ".property");
    }
    return names;
}

void BM_RenderRetrievalPrompt(benchmark::State& state) {
    auto names = relation_names(static_cast<int>(state.range(0)));
    FieldMap fields = {{"question", "Where was the director of the movie Titanic born?"},
                       {"context_narrative", "This is the start of the path."},
                       {"candidate_relations", format_relation_set(names)},
                       {"k", "3"}};
    for (auto _ : state) {
        std::string rendered = render_prompt(templates(), PromptKind::CandidateRetrieval, fields);
        benchmark::DoNotOptimize(rendered.size());
    }
}
BENCHMARK(BM_RenderRetrievalPrompt)->Arg(10)->Arg(200);

void BM_ParseRelationList(benchmark::State& state) {
    auto names = relation_names(static_cast<int>(state.range(0)));
    std::set<std::string> allowed(names.begin(), names.end());
    std::ostringstream text;
    text << "Here are my selections: [";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) text << ", ";
        text << '"' << names[i] << '"';
    }
    text << "] as requested.";
    std::string payload = text.str();
    for (auto _ : state) {
        auto out = parse_relation_list(payload, allowed, static_cast<int>(names.size()));
        benchmark::DoNotOptimize(out.size());
    }
}
BENCHMARK(BM_ParseRelationList)->Arg(4)->Arg(64);

void BM_ParseScoreMap(benchmark::State& state) {
    auto names = relation_names(static_cast<int>(state.range(0)));
    std::set<std::string> candidates(names.begin(), names.end());
    std::ostringstream text;
    text << "Scores follow. {";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) text << ", ";
        text << '"' << names[i] << "\": 0." << (i % 10);
    }
    text << "}";
    std::string payload = text.str();
    for (auto _ : state) {
        auto out = parse_score_map(payload, candidates);
        benchmark::DoNotOptimize(out.size());
    }
}
BENCHMARK(BM_ParseScoreMap)->Arg(4)->Arg(64);

}  // namespace
