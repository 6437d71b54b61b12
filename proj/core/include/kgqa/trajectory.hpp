#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgqa/kg.hpp"

namespace kgqa {

// The relation-only projection of a reasoning path: (r1, r2, ..., rt).
struct RelationSequence {
    std::vector<std::string> relations;

    std::size_t size() const { return relations.size(); }
    bool empty() const { return relations.empty(); }

    // Relations joined by the given separator; `empty_text` when there are none.
    std::string joined(const std::string& separator, const std::string& empty_text = "") const;

    auto operator<=>(const RelationSequence&) const = default;
};

// Returns a new sequence with `relation` appended; the input is untouched,
// so branches never share mutable state.
RelationSequence append(const RelationSequence& sequence, const std::string& relation);

enum class TrajectoryStatus {
    Active,
    TerminatedDepth,    // relation sequence reached the depth limit
    TerminatedNoExpand  // no retained relation could extend the path
};

const char* to_string(TrajectoryStatus status);

// The reason string rendered into trajectory-summary prompts.
// Only valid for the two terminated states.
std::string termination_reason(TrajectoryStatus status);

// One reasoning path: the relation sequence, the entities it currently binds,
// the accepted per-step scores, and a lifecycle status. Values are immutable
// once created; branching copies.
struct Trajectory {
    std::uint64_t id = 0;
    std::string question_id;
    std::vector<std::string> origin;  // root frontier this path grew from
    RelationSequence sequence;
    EntityFrontier frontier;
    std::vector<double> step_scores;  // one per accepted relation, in [0,1]
    TrajectoryStatus status = TrajectoryStatus::Active;
    bool degraded = false;  // a backend hard-failure cut this branch short
};

// Engine knobs. Defaults: L=4, I=30, zeta=0.5, k=3.
struct EngineConfig {
    int max_depth = 4;        // L
    int candidates_k = 3;     // k
    int max_iterations = 30;  // I
    double threshold = 0.5;   // zeta
    int subgraph_hops = 4;
    int neighborhood_cap = 200;

    // Throws InputError on out-of-range values.
    void validate() const;
};

// Decides the lifecycle transition for an Active trajectory: depth limit is
// checked first, then expandability. Throws ContractViolation when called on
// a trajectory that is already terminated.
TrajectoryStatus classify_termination(const Trajectory& traj, const EngineConfig& config,
                                      bool expandable);

// Mean of the accepted step scores; 0 for a zero-hop path.
double path_score(const Trajectory& traj);

// Strict "a ranks ahead of b" for answer extraction and queue priority:
// higher mean score, then shorter sequence, then lexicographic relation
// sequence, then creation id.
bool better_path(const Trajectory& a, const Trajectory& b);

}  // namespace kgqa
