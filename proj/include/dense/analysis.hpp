#pragma once

#include <array>
#include <string>
#include <vector>

#include "dense/dataio.hpp"
#include "dense/model.hpp"

// Geometric reads on learned embeddings: per-dimension (scale, psi, theta,
// phi) extraction, alignment statistics for symmetry / inversion /
// composition patterns, triangle mining over the training split, and
// histogram CSV export. Outputs feed plotting scripts; nothing here renders.

namespace dense {

struct RelationGeometry {
    RelationId relation = 0;
    std::vector<double> scale;   // k
    std::vector<double> psi;     // k, [0, 2*pi)
    std::vector<double> theta;   // k, [0, pi]
    std::vector<double> phi;     // k, [0, 2*pi)
    std::vector<char> degenerate;  // k, axis undefined (psi ~ 0)
};

// Per-dimension distance from the exact symmetry conditions |Q| = 1 and
// psi in {0, pi}.
struct SymmetryDeviation {
    std::vector<double> scale_dev;
    std::vector<double> angle_dev;
};

// Per-dimension alignment of a candidate inverse pair. Angle entries are
// wrapped to (-pi, pi]; the *_raw twins keep the unwrapped values. Axis
// comparisons are only meaningful where neither dimension is degenerate.
struct PairAlignment {
    std::vector<double> psi_sum;
    std::vector<double> psi_sum_raw;
    std::vector<double> scale_prod;
    std::vector<double> theta_diff;
    std::vector<double> phi_diff;
    std::vector<char> axis_ok;
    std::size_t axis_excluded = 0;
};

enum class CompositionVariant {
    CompareToR3,  // compose r2 after r1, compare against r3
    CompareToR1,  // compose, compare against r1
    CompareToR2,  // compose, compare against r2
    ScaleSquare,  // r3 against r1 squared: scale(r3) - scale(r1)^2
    DoubleAngle,  // r3 against r1 doubled: psi(r3) - 2*psi(r1)
};

CompositionVariant parse_composition_variant(const std::string& name);
std::string composition_variant_name(CompositionVariant v);

struct CompositionAlignment {
    CompositionVariant variant = CompositionVariant::CompareToR3;
    std::vector<double> scale_diff;
    std::vector<double> psi_diff;
    std::vector<double> psi_diff_raw;
    std::vector<double> theta_diff;
    std::vector<double> phi_diff;
    std::vector<char> axis_ok;
    std::size_t axis_excluded = 0;
};

struct TriangleSet {
    RelationId r1 = 0, r2 = 0, r3 = 0;
    // (x, y, z) with (x,r1,y), (y,r2,z), (x,r3,z) all in the training split.
    std::vector<std::array<EntityId, 3>> triangles;
};

struct EntityAxisAlignment {
    // theta(axis of r1) - theta(head entity) per non-degenerate dimension,
    // over unique head entities in first-seen order.
    std::vector<double> theta_diff;
    std::size_t skipped = 0;  // degenerate axis or near-zero entity units
};

RelationGeometry relation_geometry(const ModelParams& params, RelationId r);

SymmetryDeviation symmetry_deviation(const RelationGeometry& g);

PairAlignment inverse_alignment(const RelationGeometry& g1, const RelationGeometry& g2);

CompositionAlignment composition_alignment(const ModelParams& params, RelationId r1, RelationId r2,
                                           RelationId r3, CompositionVariant variant);

TriangleSet mine_triangles(const Dataset& ds, RelationId r1, RelationId r2, RelationId r3);

EntityAxisAlignment entity_axis_alignment(const ModelParams& params, const TriangleSet& triangles);

// Equal-width histogram over [min, max] with a right-closed last bin,
// written as CSV `bin_left,bin_right,frequency`. Frequencies sum to the
// input length.
void export_histogram(const std::vector<double>& values, int bins, const std::string& path);

}  // namespace dense
