#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kgqa/eval.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/trajectory.hpp"

namespace kgqa {

// The merged view of defaults, config file, environment, and flags, in that
// precedence order (flags win). The effective config is echoed into every
// report and trace; the API key is redacted in the echo.
struct RunConfig {
    EngineConfig engine;

    std::string backend = "scripted";  // "scripted" | "live"
    std::string scripted_rules;        // path to the rules JSON
    std::string template_dir;          // resolved lazily; see resolve_template_dir
    std::string model;
    std::string base_url;
    std::string api_path = "/v1/chat/completions";
    std::string api_key;
    RetryPolicy retry;

    std::string hits_mode = "top1";  // "top1" | "any"
    int parallel = 1;
    std::uint64_t seed = 0;
    std::uint64_t sample = 0;  // 0 = whole dataset

    // Layer a JSON config file over the current values.
    // Recognized keys: backend, scripted_rules, template_dir, model, base_url,
    // api_path, retry {max_retries, initial_backoff_ms}, engine {max_depth,
    // candidates_k, max_iterations, threshold, subgraph_hops, neighborhood_cap},
    // hits_mode, parallel.
    void apply_file(const std::string& path);

    // Layer the environment over the current values:
    // KGQA_API_KEY, KGQA_BASE_URL, KGQA_MODEL.
    void apply_env();

    // Dataset presets for the k default (webqsp -> k=3, cwq -> k=4).
    void apply_preset(const std::string& preset);

    HitsMode hits() const;

    // Effective-config echo (api_key redacted).
    std::string to_json_text() const;
};

// Picks the template directory: the explicit value if set, else
// KGQA_TEMPLATE_DIR from the environment, else the first of the compiled-in
// install/source locations that exists. Throws InputError when none do.
std::string resolve_template_dir(const std::string& explicit_dir = "");

}  // namespace kgqa
