#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kgqa {

// One directed fact: subject --relation--> object.
struct Triple {
    std::string subject;
    std::string relation;
    std::string object;

    auto operator<=>(const Triple&) const = default;
};

// The set of entities currently reachable from the topic entities via a
// trajectory's relation sequence. Deduplicated; iteration order is the
// insertion order of first reachability.
class EntityFrontier {
public:
    EntityFrontier() = default;
    explicit EntityFrontier(std::vector<std::string> entities);

    // No-op when the entity is already present.
    void insert(const std::string& entity);

    bool contains(const std::string& entity) const { return index_.count(entity) != 0; }
    bool empty() const { return entities_.empty(); }
    std::size_t size() const { return entities_.size(); }

    const std::vector<std::string>& entities() const { return entities_; }
    auto begin() const { return entities_.begin(); }
    auto end() const { return entities_.end(); }

    bool operator==(const EntityFrontier& other) const { return entities_ == other.entities_; }

private:
    std::vector<std::string> entities_;
    std::unordered_set<std::string> index_;
};

// An in-memory triple store with an outgoing-edge adjacency index.
// Immutable after construction; safe for concurrent reads.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Builds the graph from triples. Duplicates collapse; indexing is
    // order-independent, so any permutation of the input yields an equal graph.
    static KnowledgeGraph from_triples(std::vector<Triple> triples);

    // Parses TAB-separated subject/relation/object lines (UTF-8, LF endings,
    // blank lines skipped). Throws ParseError on a line with the wrong arity
    // and EmptyGraphError when no triples result.
    static KnowledgeGraph load(std::istream& in, const std::string& source_name = "<stream>");
    static KnowledgeGraph load_file(const std::string& path);

    // Writes the triple format back out, sorted, one triple per line.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;

    // Union of distinct outgoing relations over the frontier, lexicographic.
    // Unknown entities contribute nothing.
    std::vector<std::string> outgoing_relations(const EntityFrontier& frontier) const;

    // All objects reachable from the frontier over one relation, deduplicated.
    // An empty result means the relation cannot extend a path from here.
    EntityFrontier traverse(const EntityFrontier& frontier, const std::string& relation) const;

    // The subgraph of all triples lying on directed paths of length <= hops
    // from any topic entity (BFS over outgoing edges). Throws InputError when
    // none of the topics exist in the graph, naming the missing ones.
    KnowledgeGraph extract_subgraph(const std::vector<std::string>& topics, int hops) const;

    bool has_entity(const std::string& entity) const { return entities_.count(entity) != 0; }
    bool has_relation(const std::string& relation) const { return relations_.count(relation) != 0; }

    const std::set<std::string>& entities() const { return entities_; }
    const std::set<std::string>& relations() const { return relations_; }
    const std::vector<Triple>& triples() const { return triples_; }

    std::size_t entity_count() const { return entities_.size(); }
    std::size_t relation_count() const { return relations_.size(); }
    std::size_t triple_count() const { return triples_.size(); }

    bool operator==(const KnowledgeGraph& other) const { return triples_ == other.triples_; }

private:
    std::vector<Triple> triples_;  // sorted, unique
    std::set<std::string> entities_;
    std::set<std::string> relations_;
    // entity -> sorted (relation, object) pairs; exactly the projection of triples_
    std::unordered_map<std::string, std::vector<std::pair<std::string, std::string>>> adjacency_;
};

}  // namespace kgqa
