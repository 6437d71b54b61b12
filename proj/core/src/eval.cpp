#include "kgqa/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace kgqa {

using nlohmann::json;

std::vector<QAExample> load_dataset(std::istream& in, const std::string& source_name) {
    std::vector<QAExample> examples;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(source_name + ": invalid JSON: " + e.what(), line_no);
        }

        QAExample ex;
        try {
            ex.id = doc.at("id").get<std::string>();
            ex.question = doc.at("question").get<std::string>();
            ex.topic_entities = doc.at("topic_entities").get<std::vector<std::string>>();
            ex.gold_answers = doc.at("answers").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            throw SchemaError(source_name + ": " + e.what(), line_no);
        }
        if (ex.topic_entities.empty()) {
            throw SchemaError(source_name + ": topic_entities must be non-empty", line_no);
        }
        if (ex.gold_answers.empty()) {
            throw SchemaError(source_name + ": answers must be non-empty", line_no);
        }
        if (!seen_ids.insert(ex.id).second) {
            throw SchemaError(source_name + ": duplicate example id " + ex.id, line_no);
        }
        examples.push_back(std::move(ex));
    }
    return examples;
}

std::vector<QAExample> load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset file: " + path);
    return load_dataset(in, path);
}

std::vector<QAExample> sample_dataset(const std::vector<QAExample>& examples, std::size_t n,
                                      std::uint64_t seed) {
    if (n >= examples.size()) return examples;

    // Partial Fisher-Yates over indices; mt19937_64 output is standardized,
    // so the selection is reproducible across platforms.
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> indices(examples.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (indices.size() - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());

    std::vector<QAExample> out;
    out.reserve(n);
    for (std::size_t i : indices) out.push_back(examples[i]);
    return out;
}

int hits_at_1(const std::vector<std::string>& predicted, const std::set<std::string>& gold,
              HitsMode mode) {
    if (predicted.empty()) return 0;
    if (mode == HitsMode::Top1) {
        return gold.count(predicted.front()) ? 1 : 0;
    }
    for (const auto& p : predicted) {
        if (gold.count(p)) return 1;
    }
    return 0;
}

double f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
    if (gold.empty()) throw ContractViolation("f1 requires a non-empty gold set");
    if (predicted.empty()) return 0.0;

    std::size_t intersection = 0;
    for (const auto& p : predicted) {
        if (gold.count(p)) ++intersection;
    }
    double precision = static_cast<double>(intersection) / static_cast<double>(predicted.size());
    double recall = static_cast<double>(intersection) / static_cast<double>(gold.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

double one_decimal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return std::strtod(buf, nullptr);
}

EvalRow evaluate_one(const QAExample& example, const KnowledgeGraph& graph,
                     const EngineConfig& config, const GatewayConfig& gw,
                     const EvalOptions& options, std::vector<std::string>& trace_out) {
    EvalRow row;
    row.id = example.id;

    bool covered = false;
    for (const auto& t : example.topic_entities) {
        if (graph.has_entity(t)) {
            covered = true;
            break;
        }
    }
    if (!covered) {
        row.error = "topic not in graph";
        return row;
    }

    BudgetLedger ledger(example.id);
    Gateway gateway(*gw.backend, *gw.templates, ledger, gw.retry);
    try {
        ReasoningSession session(example.id, example.question, example.topic_entities, graph,
                                 config, gateway, options.priors_seed);
        AnswerSet answer = session.run();
        trace_out = session.trace_lines();

        std::set<std::string> gold(example.gold_answers.begin(), example.gold_answers.end());
        std::set<std::string> predicted(answer.entities.begin(), answer.entities.end());
        row.hits = hits_at_1(answer.entities, gold, options.hits_mode);
        row.f1 = f1(predicted, gold);
    } catch (const Error& e) {
        row.hits = 0;
        row.f1 = 0.0;
        row.error = e.what();
    }
    row.calls = ledger.llm_calls();
    row.tokens = ledger.total_tokens();
    return row;
}

}  // namespace

EvalReport run_eval(const std::vector<QAExample>& dataset, const KnowledgeGraph& graph,
                    const EngineConfig& config, const GatewayConfig& gateway,
                    const EvalOptions& options) {
    if (gateway.backend == nullptr || gateway.templates == nullptr) {
        throw InputError("run_eval needs a backend and a template set");
    }

    std::vector<EvalRow> rows(dataset.size());
    std::vector<std::vector<std::string>> traces(dataset.size());

    int workers = std::max(1, options.parallel);
    if (workers == 1 || dataset.size() <= 1) {
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            rows[i] = evaluate_one(dataset[i], graph, config, gateway, options, traces[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= dataset.size()) return;
                rows[i] = evaluate_one(dataset[i], graph, config, gateway, options, traces[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min<int>(workers, static_cast<int>(dataset.size())); ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) t.join();
    }

    // Merge step: rows (and their traces) ordered by example id.
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows[a].id < rows[b].id; });

    EvalReport report;
    for (std::size_t i : order) {
        report.rows.push_back(std::move(rows[i]));
        for (auto& line : traces[i]) report.trace_lines.push_back(std::move(line));
    }

    if (!report.rows.empty()) {
        double hits_sum = 0.0, f1_sum = 0.0, calls_sum = 0.0, tokens_sum = 0.0;
        for (const auto& row : report.rows) {
            hits_sum += row.hits;
            f1_sum += row.f1;
            calls_sum += static_cast<double>(row.calls);
            tokens_sum += static_cast<double>(row.tokens);
        }
        double n = static_cast<double>(report.rows.size());
        report.aggregates.hits_pct = one_decimal(100.0 * hits_sum / n);
        report.aggregates.f1_pct = one_decimal(100.0 * f1_sum / n);
        report.aggregates.mean_calls = one_decimal(calls_sum / n);
        report.aggregates.mean_tokens = one_decimal(tokens_sum / n);
    }
    return report;
}

std::string EvalReport::to_json_text() const {
    json rows_json = json::array();
    for (const auto& row : rows) {
        rows_json.push_back({{"id", row.id},
                             {"hits", row.hits},
                             {"f1", row.f1},
                             {"calls", row.calls},
                             {"tokens", row.tokens},
                             {"error", row.error}});
    }
    json doc = {
        {"config", json::parse(config_json_text)},
        {"rows", rows_json},
        {"aggregates",
         {{"hits_at_1", aggregates.hits_pct},
          {"f1", aggregates.f1_pct},
          {"mean_calls", aggregates.mean_calls},
          {"mean_tokens", aggregates.mean_tokens}}},
    };
    return doc.dump(2) + "\n";
}

std::string EvalReport::text_table() const {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-24s %5s %7s %7s %9s  %s\n", "id", "hits", "f1", "calls",
                  "tokens", "error");
    out << buf;
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-24s %5d %7.3f %7llu %9llu  %s\n", row.id.c_str(),
                      row.hits, row.f1, static_cast<unsigned long long>(row.calls),
                      static_cast<unsigned long long>(row.tokens), row.error.c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "Hits@1 %.1f%%  F1 %.1f%%  mean calls %.1f  mean tokens %.1f  (n=%zu)\n",
                  aggregates.hits_pct, aggregates.f1_pct, aggregates.mean_calls,
                  aggregates.mean_tokens, rows.size());
    out << buf;
    return out.str();
}

}  // namespace kgqa
