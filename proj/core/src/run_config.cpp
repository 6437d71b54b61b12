#include "kgqa/run_config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#ifndef KGQA_PROMPT_DIR_SOURCE
#define KGQA_PROMPT_DIR_SOURCE ""
#endif
#ifndef KGQA_PROMPT_DIR_INSTALL
#define KGQA_PROMPT_DIR_INSTALL ""
#endif

namespace kgqa {

using nlohmann::json;

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();

    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError("config file is not valid JSON: " + std::string(e.what()));
    }

    backend = doc.value("backend", backend);
    scripted_rules = doc.value("scripted_rules", scripted_rules);
    template_dir = doc.value("template_dir", template_dir);
    model = doc.value("model", model);
    base_url = doc.value("base_url", base_url);
    api_path = doc.value("api_path", api_path);
    hits_mode = doc.value("hits_mode", hits_mode);
    parallel = doc.value("parallel", parallel);

    if (doc.contains("retry")) {
        const json& r = doc["retry"];
        retry.max_retries = r.value("max_retries", retry.max_retries);
        retry.initial_backoff_ms = r.value("initial_backoff_ms", retry.initial_backoff_ms);
    }
    if (doc.contains("engine")) {
        const json& e = doc["engine"];
        engine.max_depth = e.value("max_depth", engine.max_depth);
        engine.candidates_k = e.value("candidates_k", engine.candidates_k);
        engine.max_iterations = e.value("max_iterations", engine.max_iterations);
        engine.threshold = e.value("threshold", engine.threshold);
        engine.subgraph_hops = e.value("subgraph_hops", engine.subgraph_hops);
        engine.neighborhood_cap = e.value("neighborhood_cap", engine.neighborhood_cap);
    }
}

void RunConfig::apply_env() {
    if (const char* v = std::getenv("KGQA_API_KEY")) api_key = v;
    if (const char* v = std::getenv("KGQA_BASE_URL")) base_url = v;
    if (const char* v = std::getenv("KGQA_MODEL")) model = v;
}

void RunConfig::apply_preset(const std::string& preset) {
    if (preset == "webqsp") {
        engine.candidates_k = 3;
    } else if (preset == "cwq") {
        engine.candidates_k = 4;
    } else {
        throw InputError("unknown preset: " + preset + " (expected webqsp or cwq)");
    }
}

HitsMode RunConfig::hits() const {
    if (hits_mode == "top1") return HitsMode::Top1;
    if (hits_mode == "any") return HitsMode::Any;
    throw InputError("unknown hits mode: " + hits_mode + " (expected top1 or any)");
}

std::string RunConfig::to_json_text() const {
    json doc = {
        {"backend", backend},
        {"scripted_rules", scripted_rules},
        {"template_dir", template_dir},
        {"model", model},
        {"base_url", base_url},
        {"api_path", api_path},
        {"api_key", api_key.empty() ? "" : "<redacted>"},
        {"retry",
         {{"max_retries", retry.max_retries}, {"initial_backoff_ms", retry.initial_backoff_ms}}},
        {"engine",
         {{"max_depth", engine.max_depth},
          {"candidates_k", engine.candidates_k},
          {"max_iterations", engine.max_iterations},
          {"threshold", engine.threshold},
          {"subgraph_hops", engine.subgraph_hops},
          {"neighborhood_cap", engine.neighborhood_cap}}},
        {"hits_mode", hits_mode},
        {"parallel", parallel},
        {"seed", seed},
        {"sample", sample},
    };
    return doc.dump();
}

std::string resolve_template_dir(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* v = std::getenv("KGQA_TEMPLATE_DIR"); v && *v) return v;
    for (const char* candidate : {KGQA_PROMPT_DIR_INSTALL, KGQA_PROMPT_DIR_SOURCE}) {
        if (*candidate && std::filesystem::is_directory(candidate)) return candidate;
    }
    throw InputError(
        "cannot locate the prompt template directory; pass --template-dir or set "
        "KGQA_TEMPLATE_DIR");
}

}  // namespace kgqa
