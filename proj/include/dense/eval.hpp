#pragma once

#include <string>
#include <vector>

#include "dense/dataio.hpp"
#include "dense/model.hpp"

// Filtered link-prediction ranking. Every query ranks all entities on one
// side, removes other known-true answers, and reports the gold entity's
// rank with average tie handling.

namespace dense {

struct RankingMetrics {
    double mr = 0.0;
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits10 = 0.0;
    std::size_t count = 0;
};

struct PerRelationRow {
    RelationId relation = 0;
    std::string name;
    double split_fraction = 0.0;  // fraction of split queries with this relation
    double mrr = 0.0;
    std::size_t count = 0;
};

// Filtered rank of the query's answer entity on the requested side:
// 1 + (# strictly better) + (# ties)/2 over unmasked candidates. No query
// rewriting happens here; pass the relation you want scored. filtered=false
// ranks against every candidate (debugging only).
double rank_query(const ModelParams& params, const Triple& query, Side side, const Dataset& ds,
                  bool filtered = true);

// Both directions per triple. Head queries are rewritten as tail queries
// under the inverse twin when the dataset is reciprocal-augmented,
// otherwise ranked directly on the head side. Metrics aggregate over
// 2 * |split| queries; the per-relation table groups by original relation.
RankingMetrics evaluate(const ModelParams& params, const std::vector<Triple>& split,
                        const Dataset& ds, int workers = 1,
                        std::vector<PerRelationRow>* per_relation = nullptr,
                        bool filtered = true);

// Fraction of ranks <= cutoff; rejects an empty rank list.
double hits_at(const std::vector<double>& ranks, int cutoff);

RankingMetrics metrics_from_ranks(const std::vector<double>& ranks);

std::string metrics_to_json(const RankingMetrics& m);

}  // namespace dense
