#include "kgqa/trajectory.hpp"

#include <numeric>
#include <sstream>

#include "kgqa/errors.hpp"

namespace kgqa {

std::string RelationSequence::joined(const std::string& separator,
                                     const std::string& empty_text) const {
    if (relations.empty()) return empty_text;
    std::ostringstream out;
    for (std::size_t i = 0; i < relations.size(); ++i) {
        if (i) out << separator;
        out << relations[i];
    }
    return out.str();
}

RelationSequence append(const RelationSequence& sequence, const std::string& relation) {
    RelationSequence next = sequence;
    next.relations.push_back(relation);
    return next;
}

const char* to_string(TrajectoryStatus status) {
    switch (status) {
        case TrajectoryStatus::Active: return "Active";
        case TrajectoryStatus::TerminatedDepth: return "TerminatedDepth";
        case TrajectoryStatus::TerminatedNoExpand: return "TerminatedNoExpand";
    }
    return "Unknown";
}

std::string termination_reason(TrajectoryStatus status) {
    switch (status) {
        case TrajectoryStatus::TerminatedDepth: return "Max depth reached";
        case TrajectoryStatus::TerminatedNoExpand: return "No expandable relations";
        case TrajectoryStatus::Active: break;
    }
    throw ContractViolation("termination_reason called on an Active trajectory");
}

void EngineConfig::validate() const {
    if (max_depth < 1) throw InputError("max_depth must be >= 1");
    if (candidates_k < 1) throw InputError("candidates_k must be >= 1");
    if (max_iterations < 0) throw InputError("max_iterations must be >= 0");
    if (threshold < 0.0 || threshold > 1.0) throw InputError("threshold must lie in [0,1]");
    if (subgraph_hops < 1) throw InputError("subgraph_hops must be >= 1");
    if (neighborhood_cap < 1) throw InputError("neighborhood_cap must be >= 1");
}

TrajectoryStatus classify_termination(const Trajectory& traj, const EngineConfig& config,
                                      bool expandable) {
    if (traj.status != TrajectoryStatus::Active) {
        throw ContractViolation("classify_termination called on a terminated trajectory");
    }
    if (traj.sequence.size() >= static_cast<std::size_t>(config.max_depth)) {
        return TrajectoryStatus::TerminatedDepth;
    }
    if (!expandable) {
        return TrajectoryStatus::TerminatedNoExpand;
    }
    return TrajectoryStatus::Active;
}

double path_score(const Trajectory& traj) {
    if (traj.step_scores.empty()) return 0.0;
    double sum = std::accumulate(traj.step_scores.begin(), traj.step_scores.end(), 0.0);
    return sum / static_cast<double>(traj.step_scores.size());
}

bool better_path(const Trajectory& a, const Trajectory& b) {
    double sa = path_score(a);
    double sb = path_score(b);
    if (sa != sb) return sa > sb;
    if (a.sequence.size() != b.sequence.size()) return a.sequence.size() < b.sequence.size();
    if (a.sequence.relations != b.sequence.relations) {
        return a.sequence.relations < b.sequence.relations;
    }
    return a.id < b.id;
}

}  // namespace kgqa
