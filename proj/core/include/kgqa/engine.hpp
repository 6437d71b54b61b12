#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgqa/kg.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/memory.hpp"
#include "kgqa/rerank.hpp"
#include "kgqa/trajectory.hpp"

namespace kgqa {

// The predicted answer: the frontier of the best-scoring path.
struct AnswerSet {
    std::vector<std::string> entities;
    std::optional<Trajectory> best_path;
    double score = 0.0;
    std::string diagnostic;  // non-empty when no scored path exists

    bool empty() const { return entities.empty(); }
};

// Counters the budget invariants are checked against.
struct SessionStats {
    std::uint64_t iterations = 0;       // queue pops (one single-step expansion each)
    std::uint64_t full_steps = 0;       // steps that ran retrieval + ranking
    std::uint64_t context_calls = 0;    // narrative generations that cost a call
    std::uint64_t terminations = 0;     // depth + no-expansion outcomes
    std::uint64_t summarized = 0;       // terminations that produced summary + priors
    std::uint64_t degraded_steps = 0;   // branches cut by backend hard failures
};

// One question's exploration: a best-first queue of active trajectories,
// stepped one single-step expansion per iteration under the (I, L, zeta, k)
// budget. Terminated trajectories are summarized and consolidated into the
// exploration priors immediately. The loop is sequential by design so that
// priors versions and the trace are deterministic.
class ReasoningSession {
public:
    ReasoningSession(std::string question_id, std::string question,
                     const std::vector<std::string>& topics, const KnowledgeGraph& graph,
                     EngineConfig config, Gateway& gateway, ExplorationPriors priors_seed = {});

    // Runs until the queue empties or I iterations elapse, then extracts the
    // answer from the best-scoring path.
    AnswerSet run();

    // Pops the best Active trajectory and performs one step; false when the
    // queue is empty or the iteration budget is spent.
    bool step_once();

    // Frontier of the argmax-score trajectory among all candidates with at
    // least one step; parents that branched are not candidates (their lineage
    // lives on in their children).
    AnswerSet extract_answer() const;

    const SessionStats& stats() const { return stats_; }
    const ExplorationPriors& priors() const { return priors_; }
    const std::vector<Trajectory>& trajectories() const { return all_; }
    const std::vector<std::string>& trace_lines() const { return trace_; }
    std::size_t queued() const { return queue_.size(); }

private:
    std::size_t pop_best();
    void step(std::size_t index);
    void finalize(std::size_t index, bool expandable);
    void terminate(std::size_t index, TrajectoryStatus status, bool degraded);
    void trace_created(const Trajectory& traj);

    std::string question_id_;
    std::string question_;
    const KnowledgeGraph& graph_;
    EngineConfig config_;
    Gateway& gateway_;

    std::vector<Trajectory> all_;   // every trajectory ever created, by id
    std::vector<bool> retired_;     // branched parents; lineage continues in children
    std::vector<std::size_t> queue_;
    ExplorationPriors priors_;
    SessionStats stats_;
    std::vector<std::string> trace_;
};

// Convenience wrapper: build a session, run it, return the answer.
AnswerSet answer_question(const std::string& question, const std::vector<std::string>& topics,
                          const KnowledgeGraph& graph, const EngineConfig& config,
                          Gateway& gateway, ExplorationPriors priors_seed = {},
                          const std::string& question_id = "q");

}  // namespace kgqa
