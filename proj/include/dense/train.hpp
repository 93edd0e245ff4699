#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dense/dataio.hpp"
#include "dense/model.hpp"

// Self-adversarial negative-sampling loss, hand-derived gradients, Adam
// with a halving learning-rate schedule, and the training loop with
// validation-based early stopping.

namespace dense {

struct AblationFlags {
    bool scaling = true;      // off: relation units projected to unit norm
    bool reciprocal = true;   // off: no inverse-relation augmentation
    bool adversarial = true;  // off: uniform negative weights
};

struct TrainingConfig {
    std::int32_t k = 200;
    std::int32_t batch_size = 512;
    double gamma = 6.0;
    std::int32_t negatives = 512;
    double adv_temperature = 0.5;
    double learning_rate = 0.1;
    std::int64_t max_steps = 20000;
    std::int64_t steps_per_epoch = 0;   // 0: ceil(|train| / batch_size)
    std::int64_t eval_every_epochs = 1000;
    std::int64_t lr_patience_epochs = 1000;
    std::int32_t early_stop_patience = 3;
    std::uint64_t seed = 0;
    int workers = 1;
    AblationFlags ablation;

    // Adam moment decay and denominator guard.
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;

    void validate() const;
};

// Sparse gradients keyed by entity / relation id; each value holds the full
// k*3 (entity) or k*4 (relation) row.
struct GradientTables {
    std::unordered_map<EntityId, std::vector<double>> entity;
    std::unordered_map<RelationId, std::vector<double>> relation;

    double* entity_row(EntityId e, std::int32_t k);
    double* relation_row(RelationId r, std::int32_t k);
    void add_scaled(const GradientTables& other, double factor);
};

struct OptimizerState {
    std::vector<double> entity_m, entity_v;
    std::vector<double> relation_m, relation_v;
    std::int64_t step = 0;
    double learning_rate = 0.1;
    double best_epoch_loss = std::numeric_limits<double>::infinity();
    std::int64_t epochs_since_improvement = 0;

    static OptimizerState make(const ModelParams& params, const TrainingConfig& cfg);
};

// Softmax of alpha * scores. The result is treated as constant during
// differentiation; no gradient flows through these weights.
std::vector<double> adversarial_weights(const std::vector<double>& neg_scores, double alpha);

// The training objective for one positive and its negative batch:
//   softplus(-(gamma + f_pos)) + sum_j p_j * softplus(gamma + f_neg_j)
// with p_j the adversarial weights (uniform 1/n when the ablation is off).
double loss(const ModelParams& params, const Triple& positive, const NegativeBatch& negatives,
            const TrainingConfig& cfg);

// Same objective with the negative weights pinned by the caller. This is
// the function backward() differentiates; the finite-difference oracle
// perturbs it with the weights held fixed.
double loss_with_weights(const ModelParams& params, const Triple& positive,
                         const NegativeBatch& negatives, const std::vector<double>& weights,
                         const TrainingConfig& cfg);

struct BackwardResult {
    double loss = 0.0;
    GradientTables grads;
};

// Analytic gradients of the loss for one positive + negatives, sparse over
// the touched entity and relation rows. Weights are recomputed from the
// current scores and then held constant.
BackwardResult backward(const ModelParams& params, const Triple& positive,
                        const NegativeBatch& negatives, const TrainingConfig& cfg);

// Bias-corrected Adam applied to the touched rows only; relation norms are
// re-floored afterwards. Non-finite gradients abort with diagnostics.
void adam_step(ModelParams& params, const GradientTables& grads, OptimizerState& state,
               const TrainingConfig& cfg);

// Halves the learning rate when the epoch loss has not strictly improved
// for lr_patience_epochs epochs; returns the current rate.
double lr_schedule(OptimizerState& state, double epoch_loss, const TrainingConfig& cfg);

struct TrainLogRecord {
    std::int64_t step = 0;
    double loss = 0.0;
    double lr = 0.0;
    std::optional<double> valid_mrr;
};

struct TrainResult {
    ModelParams best_params;   // best validation MRR; final params if never validated
    ModelParams final_params;
    std::vector<TrainLogRecord> log;
    double best_valid_mrr = std::numeric_limits<double>::quiet_NaN();
    std::int64_t steps_run = 0;
};

// Minibatch training over the dataset's training split (augment it before
// calling when reciprocal learning is on). Corruption side alternates per
// batch; negatives are seeded per (seed, step, slot) so runs reproduce
// under any worker count, though floating-point summation order is only
// fixed with workers == 1.
TrainResult train(const Dataset& ds, const TrainingConfig& cfg);

}  // namespace dense
