#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "kgqa/engine.hpp"
#include "kgqa/kg.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/memory.hpp"
#include "kgqa/trajectory.hpp"

namespace kgqa {

struct QAExample {
    std::string id;
    std::string question;
    std::vector<std::string> topic_entities;
    std::vector<std::string> gold_answers;
};

// JSON-lines: {"id", "question", "topic_entities": [...], "answers": [...]}.
// Throws SchemaError (with the line number) on missing/empty fields and on
// duplicate ids. Examples come back in file order.
std::vector<QAExample> load_dataset(std::istream& in, const std::string& source_name = "<stream>");
std::vector<QAExample> load_dataset_file(const std::string& path);

// Seeded uniform sample of n examples, original file order preserved.
// Returns everything when n >= dataset size. Deterministic across platforms.
std::vector<QAExample> sample_dataset(const std::vector<QAExample>& examples, std::size_t n,
                                      std::uint64_t seed);

enum class HitsMode {
    Top1,  // only the first predicted entity counts
    Any,   // any predicted entity in gold counts
};

// 1 when the prediction hits under the given mode, else 0. Empty predictions
// always miss.
int hits_at_1(const std::vector<std::string>& predicted, const std::set<std::string>& gold,
              HitsMode mode = HitsMode::Top1);

// Set F1 between prediction and gold: 2PR/(P+R), 0 when P+R = 0.
// Throws ContractViolation on empty gold.
double f1(const std::set<std::string>& predicted, const std::set<std::string>& gold);

struct EvalRow {
    std::string id;
    int hits = 0;
    double f1 = 0.0;
    std::uint64_t calls = 0;
    std::uint64_t tokens = 0;
    std::string error;  // empty on success
};

struct EvalAggregates {
    double hits_pct = 0.0;   // Hits@1 mean, percent, one decimal
    double f1_pct = 0.0;     // F1 mean, percent, one decimal
    double mean_calls = 0.0;
    double mean_tokens = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;  // sorted by example id
    EvalAggregates aggregates;
    std::string config_json_text = "{}";  // effective run config, echoed for reproducibility
    std::vector<std::string> trace_lines;

    // {"config": ..., "rows": [...], "aggregates": {...}}
    std::string to_json_text() const;
    std::string text_table() const;
};

// Backend wiring shared by every session an evaluation spawns.
struct GatewayConfig {
    LlmBackend* backend = nullptr;
    const TemplateSet* templates = nullptr;
    RetryPolicy retry;
};

struct EvalOptions {
    HitsMode hits_mode = HitsMode::Top1;
    int parallel = 1;
    ExplorationPriors priors_seed;  // copied into every session
};

// Runs one session per example (optionally across --parallel workers, each
// session with its own ledger and priors), scores the answers, and assembles
// rows ordered by example id. Per-example failures become zero-scored rows
// carrying the error reason; nothing is fatal.
EvalReport run_eval(const std::vector<QAExample>& dataset, const KnowledgeGraph& graph,
                    const EngineConfig& config, const GatewayConfig& gateway,
                    const EvalOptions& options = {});

}  // namespace kgqa
