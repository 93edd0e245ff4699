#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dense/util.hpp"

// Benchmark triple ingestion: tab-separated `head<TAB>relation<TAB>tail`
// text files, one fact per line, dictionaries built in first-appearance
// order. Also owns reciprocal augmentation, negative sampling, and the
// filtered candidate masks used by link-prediction evaluation.

namespace dense {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

struct Triple {
    EntityId head = 0;
    RelationId relation = 0;
    EntityId tail = 0;

    bool operator==(const Triple&) const = default;
};

enum class Side { Head, Tail };

// Name <-> id dictionary; ids are assigned in first-seen order.
class Vocab {
public:
    std::int32_t add(const std::string& name);
    std::int32_t lookup(const std::string& name) const;  // -1 when absent
    const std::string& name(std::int32_t id) const { return names_.at(id); }
    std::int32_t size() const { return static_cast<std::int32_t>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::unordered_map<std::string, std::int32_t> ids_;
    std::vector<std::string> names_;
};

class Dataset {
public:
    Vocab entities;
    Vocab relations;
    std::vector<Triple> train;
    std::vector<Triple> valid;
    std::vector<Triple> test;

    std::int32_t entity_count() const { return entities.size(); }
    std::int32_t relation_count() const { return relations.size(); }
    bool reciprocal_augmented() const { return augmented_; }

    // Original relation count before any augmentation.
    std::int32_t base_relation_count() const {
        return augmented_ ? relations.size() / 2 : relations.size();
    }
    RelationId inverse_relation(RelationId r) const;

    // True tails for (head, r) / true heads for (tail, r) over the union of
    // all three splits. Sorted, unique.
    const std::vector<EntityId>* true_tails(EntityId head, RelationId r) const;
    const std::vector<EntityId>* true_heads(EntityId tail, RelationId r) const;

    void rebuild_true_index();
    void mark_augmented() { augmented_ = true; }

private:
    static std::uint64_t key(EntityId e, RelationId r) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)) << 32) |
               static_cast<std::uint32_t>(r);
    }
    std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_by_head_rel_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_by_tail_rel_;
    bool augmented_ = false;
};

struct NegativeBatch {
    Triple positive;
    Side side = Side::Tail;
    std::vector<EntityId> corrupted_entities;
};

// Parses one triple file. With extend=true unseen names get fresh ids;
// with extend=false an unseen name raises DataError. Malformed lines raise
// DataError with the 1-based line number.
std::vector<Triple> load_triples(const std::string& path, Vocab& entities, Vocab& relations,
                                 bool extend);

// Loads all three splits, extending dictionaries from every split so that
// published entity counts (which include test-only entities) are reproduced,
// then builds the true-triple index over the union.
Dataset build_dataset(const std::string& train_path, const std::string& valid_path,
                      const std::string& test_path);

// Doubles the relation vocabulary with an inverse twin per relation and adds
// the reversed training triples. Valid/test stay untouched; head queries are
// answered later as tail queries under the twin. Rejects a second
// application.
void augment_reciprocal(Dataset& ds);

// Draws n entity ids uniformly from [0, entity_count). Corruption is not
// filtered against known true triples.
NegativeBatch sample_negatives(const Triple& triple, int n, std::int32_t entity_count, Side side,
                               Rng& rng);

// Entities excluded from ranking the given query: every entity that forms a
// known true triple on the requested side, except the query's own answer.
// mask[e] == true means entity e is filtered out.
std::vector<char> filtered_candidates(const Triple& query, Side side, const Dataset& ds);

// Entity/relation/split counts as a one-line JSON object.
std::string dataset_stats_json(const Dataset& ds);

}  // namespace dense
