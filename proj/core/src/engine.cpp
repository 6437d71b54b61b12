#include "kgqa/engine.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "kgqa/narrator.hpp"

namespace kgqa {

using nlohmann::json;

ReasoningSession::ReasoningSession(std::string question_id, std::string question,
                                   const std::vector<std::string>& topics,
                                   const KnowledgeGraph& graph, EngineConfig config,
                                   Gateway& gateway, ExplorationPriors priors_seed)
    : question_id_(std::move(question_id)),
      question_(std::move(question)),
      graph_(graph),
      config_(config),
      gateway_(gateway),
      priors_(std::move(priors_seed)) {
    config_.validate();
    if (topics.empty()) throw InputError("no topic entities given");

    std::vector<std::string> present;
    std::vector<std::string> missing;
    for (const auto& t : topics) {
        (graph_.has_entity(t) ? present : missing).push_back(t);
    }
    if (present.empty()) {
        std::string msg = "no topic entity present in graph:";
        for (const auto& m : missing) msg += " " + m;
        throw InputError(msg);
    }

    trace_.push_back(json{{"event", "session_start"},
                          {"question", question_id_},
                          {"topics", present}}
                         .dump());

    // One root per topic entity; roots score 0 and keep creation order.
    for (const auto& topic : present) {
        Trajectory root;
        root.id = all_.size();
        root.question_id = question_id_;
        root.origin = {topic};
        root.frontier.insert(topic);
        all_.push_back(std::move(root));
        retired_.push_back(false);
        queue_.push_back(all_.size() - 1);
        trace_created(all_.back());
    }
}

void ReasoningSession::trace_created(const Trajectory& traj) {
    trace_.push_back(json{{"event", "created"},
                          {"id", traj.id},
                          {"sequence", traj.sequence.relations},
                          {"frontier", traj.frontier.entities()},
                          {"score", path_score(traj)}}
                         .dump());
}

std::size_t ReasoningSession::pop_best() {
    auto best = std::min_element(queue_.begin(), queue_.end(), [this](std::size_t a, std::size_t b) {
        return better_path(all_[a], all_[b]);
    });
    std::size_t index = *best;
    queue_.erase(best);
    return index;
}

bool ReasoningSession::step_once() {
    if (queue_.empty() || stats_.iterations >= static_cast<std::uint64_t>(config_.max_iterations)) {
        return false;
    }
    std::size_t index = pop_best();
    ++stats_.iterations;
    step(index);
    return true;
}

void ReasoningSession::step(std::size_t index) {
    try {
        Narrative narrative = generate_context(question_, all_[index].sequence, gateway_);
        if (!all_[index].sequence.empty()) ++stats_.context_calls;

        std::vector<std::string> neighborhood = graph_.outgoing_relations(all_[index].frontier);
        if (neighborhood.size() > static_cast<std::size_t>(config_.neighborhood_cap)) {
            neighborhood.resize(static_cast<std::size_t>(config_.neighborhood_cap));
        }
        if (neighborhood.empty()) {
            finalize(index, false);
            return;
        }

        std::vector<std::string> candidates = retrieve_candidates(
            question_, narrative, neighborhood, config_.candidates_k, gateway_);
        if (candidates.empty()) {
            finalize(index, false);
            return;
        }

        ScoredCandidates scored = rank_candidates(question_, all_[index].sequence, candidates,
                                                  current_priors(priors_), gateway_);
        scored.narrative_used = narrative;
        scored.priors_version = priors_.version();
        ++stats_.full_steps;
        if (scored.degraded) ++stats_.degraded_steps;

        std::vector<Trajectory> children =
            expand(all_[index], scored, graph_, config_.threshold);
        if (children.empty()) {
            finalize(index, false);
            return;
        }

        // Parent branched: retire it; the children carry the lineage.
        retired_[index] = true;
        std::vector<std::uint64_t> child_ids;
        std::vector<std::size_t> child_indices;
        for (auto& child : children) {
            child.id = all_.size();
            child_ids.push_back(child.id);
            all_.push_back(std::move(child));
            retired_.push_back(false);
            child_indices.push_back(all_.size() - 1);
            trace_created(all_.back());
        }
        trace_.push_back(json{{"event", "expanded"},
                              {"id", all_[index].id},
                              {"children", child_ids}}
                             .dump());

        for (std::size_t ci : child_indices) {
            TrajectoryStatus status = classify_termination(all_[ci], config_, true);
            if (status == TrajectoryStatus::Active) {
                queue_.push_back(ci);
            } else {
                terminate(ci, status, false);
            }
        }
    } catch (const BackendError&) {
        ++stats_.degraded_steps;
        terminate(index, TrajectoryStatus::TerminatedNoExpand, true);
    } catch (const EmptyCompletionError&) {
        ++stats_.degraded_steps;
        terminate(index, TrajectoryStatus::TerminatedNoExpand, true);
    }
}

void ReasoningSession::finalize(std::size_t index, bool expandable) {
    TrajectoryStatus status = classify_termination(all_[index], config_, expandable);
    if (status == TrajectoryStatus::Active) {
        queue_.push_back(index);  // still expandable; unreachable in the current pipeline
        return;
    }
    terminate(index, status, false);
}

void ReasoningSession::terminate(std::size_t index, TrajectoryStatus status, bool degraded) {
    all_[index].status = status;
    all_[index].degraded = degraded;
    ++stats_.terminations;
    trace_.push_back(json{{"event", "terminated"},
                          {"id", all_[index].id},
                          {"reason", degraded ? "degraded" : termination_reason(status)}}
                         .dump());
    if (degraded) return;  // summarization would hit the same failing backend

    try {
        TrajectorySummary summary = summarize_trajectory(question_, all_[index], gateway_);
        priors_ = consolidate(priors_, std::move(summary), gateway_);
        ++stats_.summarized;
        trace_.push_back(json{{"event", "summarized"},
                              {"id", all_[index].id},
                              {"priors_version", priors_.version()}}
                             .dump());
    } catch (const BackendError&) {
        trace_.push_back(json{{"event", "summary_failed"}, {"id", all_[index].id}}.dump());
    } catch (const EmptyCompletionError&) {
        trace_.push_back(json{{"event", "summary_failed"}, {"id", all_[index].id}}.dump());
    }
}

AnswerSet ReasoningSession::extract_answer() const {
    const Trajectory* best = nullptr;
    for (std::size_t i = 0; i < all_.size(); ++i) {
        if (retired_[i]) continue;
        if (all_[i].sequence.empty()) continue;
        if (best == nullptr || better_path(all_[i], *best)) best = &all_[i];
    }

    AnswerSet answer;
    if (best == nullptr) {
        answer.diagnostic = "no scored path: no trajectory ever expanded";
        return answer;
    }
    answer.entities = best->frontier.entities();
    answer.best_path = *best;
    answer.score = path_score(*best);
    return answer;
}

AnswerSet ReasoningSession::run() {
    while (step_once()) {
    }
    AnswerSet answer = extract_answer();
    trace_.push_back(json{{"event", "answer"},
                          {"entities", answer.entities},
                          {"path", answer.best_path ? answer.best_path->sequence.relations
                                                    : std::vector<std::string>{}},
                          {"score", answer.score}}
                         .dump());
    return answer;
}

AnswerSet answer_question(const std::string& question, const std::vector<std::string>& topics,
                          const KnowledgeGraph& graph, const EngineConfig& config,
                          Gateway& gateway, ExplorationPriors priors_seed,
                          const std::string& question_id) {
    ReasoningSession session(question_id, question, topics, graph, config, gateway,
                             std::move(priors_seed));
    return session.run();
}

}  // namespace kgqa
