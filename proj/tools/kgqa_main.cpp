// kgqa: multi-hop question answering over knowledge-graph triple files.
//
// Subcommands: ingest, ask, eval, priors, sweep. Exit codes: 0 success,
// 1 input error, 2 backend failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgqa/engine.hpp"
#include "kgqa/errors.hpp"
#include "kgqa/eval.hpp"
#include "kgqa/kg.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/memory.hpp"
#include "kgqa/run_config.hpp"

namespace {

using namespace kgqa;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> split_csv_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_csv(text)) out.push_back(std::stod(item));
    return out;
}

std::vector<int> split_csv_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split_csv(text)) out.push_back(std::stoi(item));
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

void write_trace_file(const std::string& path, const RunConfig& rc,
                      const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write trace file: " + path);
    out << "{\"event\":\"run_config\",\"config\":" << rc.to_json_text() << "}\n";
    for (const auto& line : lines) out << line << '\n';
}

// Flags shared by the subcommands that run the engine. Values are only
// layered onto the RunConfig when the user actually passed them.
struct EngineFlags {
    std::string config_file;
    std::string backend;
    std::string scripted_rules;
    std::string template_dir;
    std::string model;
    std::string base_url;
    std::string preset;
    int k = 0;
    int depth = 0;
    int iters = 0;
    double threshold = 0.0;
    int neighborhood_cap = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (flags override it)");
        cmd->add_option("--backend", backend, "Backend: scripted|live");
        cmd->add_option("--scripted-rules", scripted_rules, "Scripted backend rules JSON");
        cmd->add_option("--template-dir", template_dir, "Prompt template directory");
        cmd->add_option("--model", model, "Live backend model name");
        cmd->add_option("--base-url", base_url, "Live backend base URL");
        cmd->add_option("--preset", preset, "Dataset preset: webqsp (k=3) | cwq (k=4)");
        cmd->add_option("--k", k, "Candidate relations per step");
        cmd->add_option("--depth", depth, "Maximum path length L");
        cmd->add_option("--iters", iters, "Maximum iterations I");
        cmd->add_option("--threshold", threshold, "Confidence threshold zeta");
        cmd->add_option("--neighborhood-cap", neighborhood_cap,
                        "Maximum relations rendered into a prompt");
    }

    RunConfig build(const CLI::App* cmd) const {
        RunConfig rc;
        if (cmd->count("--config")) rc.apply_file(config_file);
        rc.apply_env();
        if (cmd->count("--preset")) rc.apply_preset(preset);
        if (cmd->count("--backend")) rc.backend = backend;
        if (cmd->count("--scripted-rules")) rc.scripted_rules = scripted_rules;
        if (cmd->count("--template-dir")) rc.template_dir = template_dir;
        if (cmd->count("--model")) rc.model = model;
        if (cmd->count("--base-url")) rc.base_url = base_url;
        if (cmd->count("--k")) rc.engine.candidates_k = k;
        if (cmd->count("--depth")) rc.engine.max_depth = depth;
        if (cmd->count("--iters")) rc.engine.max_iterations = iters;
        if (cmd->count("--threshold")) rc.engine.threshold = threshold;
        if (cmd->count("--neighborhood-cap")) rc.engine.neighborhood_cap = neighborhood_cap;
        rc.engine.validate();
        return rc;
    }
};

std::unique_ptr<LlmBackend> make_backend(const RunConfig& rc) {
    if (rc.backend == "scripted") {
        if (rc.scripted_rules.empty()) {
            throw InputError("scripted backend needs --scripted-rules (or scripted_rules in the config file)");
        }
        return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(rc.scripted_rules));
    }
    if (rc.backend == "live") {
        HttpBackend::Options options;
        options.base_url = rc.base_url;
        options.model = rc.model;
        options.api_key = rc.api_key;
        options.api_path = rc.api_path;
        return std::make_unique<HttpBackend>(options);
    }
    throw InputError("unknown backend: " + rc.backend + " (expected scripted or live)");
}

int run_ingest(const std::string& graph_path, const std::string& topics_csv, int hops,
               const std::string& out_path) {
    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    KnowledgeGraph sub = graph.extract_subgraph(split_csv(topics_csv), hops);
    sub.save_file(out_path);
    std::printf("wrote %zu triples (%zu entities, %zu relations) to %s\n", sub.triple_count(),
                sub.entity_count(), sub.relation_count(), out_path.c_str());
    return 0;
}

int run_ask(const RunConfig& rc, const std::string& graph_path, const std::string& question,
            const std::string& topics_csv, const std::string& trace_path,
            const std::string& priors_in, const std::string& priors_out) {
    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    TemplateSet templates = TemplateSet::load(resolve_template_dir(rc.template_dir));
    auto backend = make_backend(rc);

    ExplorationPriors priors_seed;
    if (!priors_in.empty()) priors_seed = ExplorationPriors::load_file(priors_in);

    BudgetLedger ledger("ask");
    Gateway gateway(*backend, templates, ledger, rc.retry);
    ReasoningSession session("ask", question, split_csv(topics_csv), graph, rc.engine, gateway,
                             std::move(priors_seed));
    AnswerSet answer = session.run();

    bool all_steps_degraded = answer.empty() && session.stats().iterations > 0 &&
                              session.stats().full_steps == 0 &&
                              session.stats().degraded_steps > 0;
    if (answer.empty()) {
        std::printf("answers: (none)\n");
        if (!answer.diagnostic.empty()) std::printf("diagnostic: %s\n", answer.diagnostic.c_str());
    } else {
        std::printf("answers:\n");
        for (const auto& e : answer.entities) std::printf("  %s\n", e.c_str());
        std::printf("path: %s\n",
                    answer.best_path->sequence.joined(" -> ", "(empty)").c_str());
        std::printf("score: %g\n", answer.score);
    }
    std::printf("llm_calls: %llu\ntotal_tokens: %llu\n",
                static_cast<unsigned long long>(ledger.llm_calls()),
                static_cast<unsigned long long>(ledger.total_tokens()));

    if (!trace_path.empty()) write_trace_file(trace_path, rc, session.trace_lines());
    if (!priors_out.empty()) session.priors().save_file(priors_out);
    return all_steps_degraded ? 2 : 0;
}

int run_eval_cmd(const RunConfig& rc, const std::string& graph_path,
                 const std::string& dataset_path, const std::string& out_path,
                 const std::string& trace_path, const std::string& priors_in) {
    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    TemplateSet templates = TemplateSet::load(resolve_template_dir(rc.template_dir));
    auto backend = make_backend(rc);

    std::vector<QAExample> dataset = load_dataset_file(dataset_path);
    if (rc.sample > 0) dataset = sample_dataset(dataset, rc.sample, rc.seed);

    EvalOptions options;
    options.hits_mode = rc.hits();
    options.parallel = rc.parallel;
    if (!priors_in.empty()) options.priors_seed = ExplorationPriors::load_file(priors_in);

    GatewayConfig gw{backend.get(), &templates, rc.retry};
    EvalReport report = run_eval(dataset, graph, rc.engine, gw, options);
    report.config_json_text = rc.to_json_text();

    std::fputs(report.text_table().c_str(), stdout);
    if (!out_path.empty()) write_text_file(out_path, report.to_json_text());
    if (!trace_path.empty()) write_trace_file(trace_path, rc, report.trace_lines);
    return 0;
}

int run_priors(const std::string& action, const std::string& file, const std::string& in_path,
               const std::string& out_path) {
    if (action == "show") {
        ExplorationPriors priors = ExplorationPriors::load_file(file);
        std::printf("version: %d\n", priors.version());
        std::printf("text: %s\n", current_priors(priors).c_str());
        std::printf("summaries (%zu):\n", priors.summaries().size());
        for (const auto& s : priors.summaries()) {
            std::printf("  - [%s] %s | %s\n", s.termination_reason.c_str(),
                        s.source_sequence.joined(" -> ", "(empty)").c_str(), s.text.c_str());
        }
        return 0;
    }
    if (action == "export") {
        ExplorationPriors priors = ExplorationPriors::load_file(file);
        write_text_file(out_path, priors.text() + "\n");
        std::printf("exported priors text to %s\n", out_path.c_str());
        return 0;
    }
    if (action == "import") {
        ExplorationPriors priors = ExplorationPriors::load_file(in_path);
        priors.save_file(file);
        std::printf("imported %zu summaries (version %d) into %s\n", priors.summaries().size(),
                    priors.version(), file.c_str());
        return 0;
    }
    throw InputError("unknown priors action: " + action + " (expected show, export, or import)");
}

int run_sweep(const RunConfig& base, const std::string& graph_path,
              const std::string& dataset_path, const std::string& out_path,
              const std::vector<int>& ks, const std::vector<int>& depths,
              const std::vector<double>& zetas) {
    KnowledgeGraph graph = KnowledgeGraph::load_file(graph_path);
    TemplateSet templates = TemplateSet::load(resolve_template_dir(base.template_dir));
    auto backend = make_backend(base);

    std::vector<QAExample> dataset = load_dataset_file(dataset_path);
    if (base.sample > 0) dataset = sample_dataset(dataset, base.sample, base.seed);

    std::ostringstream csv;
    csv << "k,depth,zeta,hits_at_1,f1,mean_calls,mean_tokens\n";
    for (int k : ks) {
        for (int depth : depths) {
            for (double zeta : zetas) {
                EngineConfig config = base.engine;
                config.candidates_k = k;
                config.max_depth = depth;
                config.threshold = zeta;

                EvalOptions options;
                options.hits_mode = base.hits();
                options.parallel = base.parallel;
                GatewayConfig gw{backend.get(), &templates, base.retry};
                EvalReport report = run_eval(dataset, graph, config, gw, options);

                char line[160];
                std::snprintf(line, sizeof(line), "%d,%d,%.2f,%.1f,%.1f,%.1f,%.1f\n", k, depth,
                              zeta, report.aggregates.hits_pct, report.aggregates.f1_pct,
                              report.aggregates.mean_calls, report.aggregates.mean_tokens);
                csv << line;
            }
        }
    }
    write_text_file(out_path, csv.str());
    std::printf("wrote %zu sweep rows to %s\n", ks.size() * depths.size() * zetas.size(),
                out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-hop question answering over knowledge-graph triple files"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Extract a topic-centered subgraph");
    std::string ingest_graph, ingest_topics, ingest_out;
    int ingest_hops = EngineConfig{}.subgraph_hops;
    ingest->add_option("--graph", ingest_graph, "Input triple file")->required();
    ingest->add_option("--topics", ingest_topics, "Comma-separated topic entities")->required();
    ingest->add_option("--hops", ingest_hops, "Hop radius");
    ingest->add_option("--out", ingest_out, "Output triple file")->required();

    // ask
    auto* ask = app.add_subcommand("ask", "Answer one question");
    EngineFlags ask_flags;
    std::string ask_graph, ask_question, ask_topics, ask_trace, ask_priors_in, ask_priors_out;
    ask->add_option("--graph", ask_graph, "Triple file")->required();
    ask->add_option("--question", ask_question, "Question text")->required();
    ask->add_option("--topics", ask_topics, "Comma-separated topic entities")->required();
    ask->add_option("--trace", ask_trace, "Write a JSON-lines trace log here");
    ask->add_option("--priors-in", ask_priors_in, "Seed exploration priors from this JSON file");
    ask->add_option("--priors-out", ask_priors_out, "Write final exploration priors here");
    ask_flags.add_to(ask);

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a dataset");
    EngineFlags eval_flags;
    std::string eval_graph, eval_dataset, eval_out, eval_trace, eval_priors_in, eval_hits_mode;
    std::uint64_t eval_sample = 0, eval_seed = 0;
    int eval_parallel = 0;
    eval->add_option("--graph", eval_graph, "Triple file")->required();
    eval->add_option("--dataset", eval_dataset, "JSON-lines dataset")->required();
    eval->add_option("--out", eval_out, "Write the JSON report here");
    eval->add_option("--trace", eval_trace, "Write a JSON-lines trace log here");
    eval->add_option("--priors-in", eval_priors_in, "Seed every session's priors from this file");
    eval->add_option("--sample", eval_sample, "Seeded uniform sample size");
    eval->add_option("--seed", eval_seed, "Sampling seed");
    eval->add_option("--parallel", eval_parallel, "Concurrent sessions");
    eval->add_option("--hits-mode", eval_hits_mode, "Hits@1 semantics: top1|any");
    eval_flags.add_to(eval);

    // priors
    auto* priors = app.add_subcommand("priors", "Inspect or convert priors files");
    std::string priors_action, priors_file, priors_in_path, priors_out_path;
    priors->add_option("action", priors_action, "show | export | import")->required();
    priors->add_option("--file", priors_file, "Priors JSON file");
    priors->add_option("--in", priors_in_path, "Input file (import)");
    priors->add_option("--out", priors_out_path, "Output file (export)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Grid-sweep k, depth, and threshold");
    EngineFlags sweep_flags;
    std::string sweep_graph, sweep_dataset, sweep_out;
    std::string sweep_ks = "2,3,4,5", sweep_depths = "2,3,4,5", sweep_zetas = "0.4,0.5,0.6,0.7";
    std::uint64_t sweep_sample = 0, sweep_seed = 0;
    sweep->add_option("--graph", sweep_graph, "Triple file")->required();
    sweep->add_option("--dataset", sweep_dataset, "JSON-lines dataset")->required();
    sweep->add_option("--out", sweep_out, "Write the CSV here")->required();
    sweep->add_option("--k-values", sweep_ks, "Comma-separated k grid");
    sweep->add_option("--depths", sweep_depths, "Comma-separated depth grid");
    sweep->add_option("--zeta", sweep_zetas, "Comma-separated threshold grid");
    sweep->add_option("--sample", sweep_sample, "Seeded uniform sample size");
    sweep->add_option("--seed", sweep_seed, "Sampling seed");
    sweep_flags.add_to(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) {
            return run_ingest(ingest_graph, ingest_topics, ingest_hops, ingest_out);
        }
        if (ask->parsed()) {
            RunConfig rc = ask_flags.build(ask);
            return run_ask(rc, ask_graph, ask_question, ask_topics, ask_trace, ask_priors_in,
                           ask_priors_out);
        }
        if (eval->parsed()) {
            RunConfig rc = eval_flags.build(eval);
            if (eval->count("--sample")) rc.sample = eval_sample;
            if (eval->count("--seed")) rc.seed = eval_seed;
            if (eval->count("--parallel")) rc.parallel = eval_parallel;
            if (eval->count("--hits-mode")) rc.hits_mode = eval_hits_mode;
            return run_eval_cmd(rc, eval_graph, eval_dataset, eval_out, eval_trace,
                                eval_priors_in);
        }
        if (priors->parsed()) {
            return run_priors(priors_action, priors_file, priors_in_path, priors_out_path);
        }
        if (sweep->parsed()) {
            RunConfig rc = sweep_flags.build(sweep);
            if (sweep->count("--sample")) rc.sample = sweep_sample;
            if (sweep->count("--seed")) rc.seed = sweep_seed;
            return run_sweep(rc, sweep_graph, sweep_dataset, sweep_out, split_csv_ints(sweep_ks),
                             split_csv_ints(sweep_depths), split_csv_doubles(sweep_zetas));
        }
    } catch (const BackendError& e) {
        std::fprintf(stderr, "backend error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
