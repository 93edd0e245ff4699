#pragma once

#include <cstdint>
#include <vector>

#include "dense/dataio.hpp"
#include "dense/rot3.hpp"
#include "dense/util.hpp"

// Embedding storage and the scoring function. Each entity is k units of
// Vec3; each relation is k units of Quaternion acting per unit as a
// rotation+scaling operator. The score of (h, r, t) is the negative mean of
// two Euclidean distances taken over the concatenated 3k-dimensional
// vectors: |O(r)h - t| forward and |O(r^-1)t - h| backward.

namespace dense {

// Per-unit quaternion norms are floored here after initialization and after
// every optimizer step; the operator is undefined at zero.
constexpr double kRelationNormFloor = 1e-8;

// Guard for distance denominators in gradients; h == t under an identity
// operator is reachable.
constexpr double kDistanceEpsilon = 1e-12;

class ModelParams {
public:
    ModelParams() = default;
    ModelParams(std::int32_t entity_count, std::int32_t relation_count, std::int32_t k,
                bool scaling = true);

    std::int32_t entity_count() const { return entity_count_; }
    std::int32_t relation_count() const { return relation_count_; }
    std::int32_t k() const { return k_; }

    // With scaling disabled every relation unit is consumed through a
    // projection to unit norm, reducing the operator to a pure rotation.
    bool scaling() const { return scaling_; }
    void set_scaling(bool on) { scaling_ = on; }

    double* entity_unit(EntityId e, std::int32_t i) { return &entity_[(static_cast<std::size_t>(e) * k_ + i) * 3]; }
    const double* entity_unit(EntityId e, std::int32_t i) const { return &entity_[(static_cast<std::size_t>(e) * k_ + i) * 3]; }
    double* relation_unit_raw(RelationId r, std::int32_t i) { return &relation_[(static_cast<std::size_t>(r) * k_ + i) * 4]; }
    const double* relation_unit_raw(RelationId r, std::int32_t i) const { return &relation_[(static_cast<std::size_t>(r) * k_ + i) * 4]; }

    Vec3 entity_vec(EntityId e, std::int32_t i) const {
        const double* p = entity_unit(e, i);
        return {p[0], p[1], p[2]};
    }
    // The quaternion as the forward pass consumes it: raw when scaling is
    // enabled, normalized to unit norm when it is ablated.
    Quaternion relation_quat(RelationId r, std::int32_t i) const;

    std::vector<double>& entity_table() { return entity_; }
    const std::vector<double>& entity_table() const { return entity_; }
    std::vector<double>& relation_table() { return relation_; }
    const std::vector<double>& relation_table() const { return relation_; }

    void floor_relation_norms();
    void floor_relation_norm(RelationId r, std::int32_t i);

private:
    std::int32_t entity_count_ = 0;
    std::int32_t relation_count_ = 0;
    std::int32_t k_ = 0;
    bool scaling_ = true;
    std::vector<double> entity_;    // entity_count * k * 3, row-major
    std::vector<double> relation_;  // relation_count * k * 4, row-major (a, b, c, d)
};

// Every scalar drawn i.i.d. uniform from [-1/sqrt(2k), +1/sqrt(2k)];
// relation norms floored afterwards.
ModelParams init_params(std::int32_t entity_count, std::int32_t relation_count, std::int32_t k,
                        Rng& rng, bool scaling = true);

// Score of a single triple; always <= 0, and 0 exactly when the operator
// maps every head unit onto the tail unit.
double score(const ModelParams& params, EntityId h, RelationId r, EntityId t);

// Scores all candidate entities substituted on `side`, with the other
// entity fixed. Equivalent to entity_count calls of score() but computes
// the anchored operator application once per unit: for a fixed head,
// |O(r^-1)t - h| equals |t - O(r)h| / |Q| per unit because the rotation is
// an isometry, so each candidate costs only two residual norms.
std::vector<double> score_against_all(const ModelParams& params, EntityId fixed, RelationId r,
                                      Side side);

}  // namespace dense
