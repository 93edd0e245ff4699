#include "dense/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "dense/errors.hpp"
#include "dense/rot3.hpp"
#include "dense/util.hpp"

namespace dense {

namespace {

void check_relation(const ModelParams& params, RelationId r) {
    if (r < 0 || r >= params.relation_count())
        throw NumericError("analysis: relation id out of range: " + std::to_string(r));
}

AxisAngleScaling decompose_unit(const ModelParams& params, RelationId r, std::int32_t i) {
    return decompose(params.relation_quat(r, i));
}

Vec3 axis_of(const AxisAngleScaling& a) {
    return {std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi),
            std::cos(a.theta)};
}

// (psi, theta, phi) and (2*pi - psi, pi - theta, phi + pi) describe the
// same rotation (the two quaternion representatives). Alignment statistics
// compare the representative whose axis points along the reference axis;
// otherwise the comparison measures the arbitrary sign of the stored
// quaternion instead of the operator.
AxisAngleScaling align_to_reference(const AxisAngleScaling& a, const AxisAngleScaling& ref) {
    if (a.degenerate || ref.degenerate) return a;
    if (axis_of(a).dot(axis_of(ref)) >= 0.0) return a;
    AxisAngleScaling flipped = a;
    flipped.psi = wrap_angle_positive(kTwoPi - a.psi);
    flipped.theta = kPi - a.theta;
    flipped.phi = wrap_angle_positive(a.phi + kPi);
    return flipped;
}

AxisAngleScaling geometry_dim(const RelationGeometry& g, std::size_t i) {
    AxisAngleScaling a;
    a.scale = g.scale[i];
    a.psi = g.psi[i];
    a.theta = g.theta[i];
    a.phi = g.phi[i];
    a.degenerate = g.degenerate[i] != 0;
    return a;
}

}  // namespace

CompositionVariant parse_composition_variant(const std::string& name) {
    if (name == "compare-to-r3") return CompositionVariant::CompareToR3;
    if (name == "compare-to-r1") return CompositionVariant::CompareToR1;
    if (name == "compare-to-r2") return CompositionVariant::CompareToR2;
    if (name == "scale-square") return CompositionVariant::ScaleSquare;
    if (name == "double-angle") return CompositionVariant::DoubleAngle;
    throw ConfigError("unknown composition variant: " + name +
                      " (expected compare-to-r3, compare-to-r1, compare-to-r2, scale-square, "
                      "double-angle)");
}

std::string composition_variant_name(CompositionVariant v) {
    switch (v) {
        case CompositionVariant::CompareToR3: return "compare-to-r3";
        case CompositionVariant::CompareToR1: return "compare-to-r1";
        case CompositionVariant::CompareToR2: return "compare-to-r2";
        case CompositionVariant::ScaleSquare: return "scale-square";
        case CompositionVariant::DoubleAngle: return "double-angle";
    }
    throw ConfigError("unknown composition variant");
}

RelationGeometry relation_geometry(const ModelParams& params, RelationId r) {
    check_relation(params, r);
    RelationGeometry g;
    g.relation = r;
    const std::int32_t k = params.k();
    g.scale.resize(k);
    g.psi.resize(k);
    g.theta.resize(k);
    g.phi.resize(k);
    g.degenerate.resize(k);
    for (std::int32_t i = 0; i < k; ++i) {
        const AxisAngleScaling a = decompose_unit(params, r, i);
        g.scale[i] = a.scale;
        g.psi[i] = a.psi;
        g.theta[i] = a.theta;
        g.phi[i] = a.phi;
        g.degenerate[i] = a.degenerate ? 1 : 0;
    }
    return g;
}

SymmetryDeviation symmetry_deviation(const RelationGeometry& g) {
    SymmetryDeviation dev;
    const std::size_t k = g.scale.size();
    dev.scale_dev.resize(k);
    dev.angle_dev.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        dev.scale_dev[i] = std::abs(g.scale[i] - 1.0);
        const double to_zero = std::abs(wrap_angle(g.psi[i]));
        const double to_pi = std::abs(wrap_angle(g.psi[i] - kPi));
        dev.angle_dev[i] = std::min(to_zero, to_pi);
    }
    return dev;
}

PairAlignment inverse_alignment(const RelationGeometry& g1, const RelationGeometry& g2) {
    if (g1.scale.size() != g2.scale.size())
        throw NumericError("inverse_alignment: embedding sizes differ");
    PairAlignment out;
    const std::size_t k = g1.scale.size();
    out.psi_sum.resize(k);
    out.psi_sum_raw.resize(k);
    out.scale_prod.resize(k);
    out.theta_diff.resize(k, 0.0);
    out.phi_diff.resize(k, 0.0);
    out.axis_ok.resize(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const AxisAngleScaling a = geometry_dim(g1, i);
        const AxisAngleScaling b = align_to_reference(geometry_dim(g2, i), a);
        out.psi_sum_raw[i] = a.psi + b.psi;
        out.psi_sum[i] = wrap_angle(out.psi_sum_raw[i]);
        out.scale_prod[i] = a.scale * b.scale;
        if (a.degenerate || b.degenerate) {
            out.axis_excluded += 1;
            continue;
        }
        out.axis_ok[i] = 1;
        out.theta_diff[i] = wrap_angle(a.theta - b.theta);
        out.phi_diff[i] = wrap_angle(a.phi - b.phi);
    }
    return out;
}

CompositionAlignment composition_alignment(const ModelParams& params, RelationId r1, RelationId r2,
                                           RelationId r3, CompositionVariant variant) {
    check_relation(params, r1);
    check_relation(params, r2);
    check_relation(params, r3);
    const std::int32_t k = params.k();
    CompositionAlignment out;
    out.variant = variant;
    out.scale_diff.resize(k);
    out.psi_diff.resize(k);
    out.psi_diff_raw.resize(k);
    out.theta_diff.resize(k, 0.0);
    out.phi_diff.resize(k, 0.0);
    out.axis_ok.resize(k, 0);

    for (std::int32_t i = 0; i < k; ++i) {
        AxisAngleScaling lhs;  // what the relation path produces
        AxisAngleScaling rhs;  // what it is compared against
        double scale_diff, psi_raw;
        switch (variant) {
            case CompositionVariant::CompareToR3:
            case CompositionVariant::CompareToR1:
            case CompositionVariant::CompareToR2: {
                const Quaternion composed =
                    compose_operators(params.relation_quat(r2, i), params.relation_quat(r1, i));
                const RelationId target = variant == CompositionVariant::CompareToR3 ? r3
                                          : variant == CompositionVariant::CompareToR1 ? r1
                                                                                       : r2;
                rhs = decompose_unit(params, target, i);
                lhs = align_to_reference(decompose(composed), rhs);
                scale_diff = lhs.scale - rhs.scale;
                psi_raw = lhs.psi - rhs.psi;
                break;
            }
            case CompositionVariant::ScaleSquare:
            case CompositionVariant::DoubleAngle: {
                // Two hops of r1 against r3: the scale should square and the
                // angle double when the pattern holds.
                rhs = decompose_unit(params, r1, i);
                lhs = align_to_reference(decompose_unit(params, r3, i), rhs);
                scale_diff = lhs.scale - rhs.scale * rhs.scale;
                psi_raw = variant == CompositionVariant::DoubleAngle ? lhs.psi - 2.0 * rhs.psi
                                                                     : lhs.psi - rhs.psi;
                break;
            }
            default:
                throw ConfigError("composition_alignment: unknown variant");
        }
        out.scale_diff[i] = scale_diff;
        out.psi_diff_raw[i] = psi_raw;
        out.psi_diff[i] = wrap_angle(psi_raw);
        if (lhs.degenerate || rhs.degenerate) {
            out.axis_excluded += 1;
            continue;
        }
        out.axis_ok[i] = 1;
        out.theta_diff[i] = wrap_angle(lhs.theta - rhs.theta);
        out.phi_diff[i] = wrap_angle(lhs.phi - rhs.phi);
    }
    return out;
}

TriangleSet mine_triangles(const Dataset& ds, RelationId r1, RelationId r2, RelationId r3) {
    const auto n_rel = ds.relation_count();
    if (r1 < 0 || r1 >= n_rel || r2 < 0 || r2 >= n_rel || r3 < 0 || r3 >= n_rel)
        throw NumericError("mine_triangles: relation id out of range");

    TriangleSet out;
    out.r1 = r1;
    out.r2 = r2;
    out.r3 = r3;

    std::vector<std::pair<EntityId, EntityId>> first_hop;  // (x, y) with (x, r1, y)
    std::unordered_map<EntityId, std::vector<EntityId>> second_hop;  // y -> z with (y, r2, z)
    std::unordered_set<std::uint64_t> closing;  // packed (x, z) with (x, r3, z)
    auto pack = [](EntityId a, EntityId b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    };
    for (const Triple& t : ds.train) {
        if (t.relation == r1) first_hop.emplace_back(t.head, t.tail);
        if (t.relation == r2) second_hop[t.head].push_back(t.tail);
        if (t.relation == r3) closing.insert(pack(t.head, t.tail));
    }

    for (const auto& [x, y] : first_hop) {
        const auto it = second_hop.find(y);
        if (it == second_hop.end()) continue;
        for (const EntityId z : it->second) {
            if (closing.count(pack(x, z))) out.triangles.push_back({x, y, z});
        }
    }
    return out;
}

EntityAxisAlignment entity_axis_alignment(const ModelParams& params, const TriangleSet& triangles) {
    if (triangles.triangles.empty())
        throw DataError("entity_axis_alignment: empty triangle set");

    const RelationGeometry g1 = relation_geometry(params, triangles.r1);
    std::vector<EntityId> heads;
    std::unordered_set<EntityId> seen;
    for (const auto& tri : triangles.triangles) {
        if (seen.insert(tri[0]).second) heads.push_back(tri[0]);
    }

    EntityAxisAlignment out;
    const std::int32_t k = params.k();
    for (const EntityId h : heads) {
        for (std::int32_t i = 0; i < k; ++i) {
            if (g1.degenerate[i]) {
                out.skipped += 1;
                continue;
            }
            const Vec3 w = params.entity_vec(h, i);
            const double n = w.norm();
            if (n < 1e-12) {
                out.skipped += 1;
                continue;
            }
            const double theta_entity = std::acos(std::min(1.0, std::max(-1.0, w.z / n)));
            out.theta_diff.push_back(g1.theta[i] - theta_entity);
        }
    }
    if (out.theta_diff.empty())
        throw DataError("entity_axis_alignment: all entity units degenerate");
    return out;
}

void export_histogram(const std::vector<double>& values, int bins, const std::string& path) {
    if (bins < 1) throw ConfigError("export_histogram: bins must be >= 1");
    if (values.empty()) throw DataError("export_histogram: empty value list");
    for (const double v : values)
        if (!std::isfinite(v)) throw NumericError("export_histogram: non-finite value");

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi - lo) / static_cast<double>(bins);

    std::vector<std::size_t> freq(bins, 0);
    for (const double v : values) {
        int idx = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
        idx = std::min(idx, bins - 1);  // right-close the last bin
        idx = std::max(idx, 0);
        freq[idx] += 1;
    }

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("export_histogram: cannot open " + path);
    out << "bin_left,bin_right,frequency\n";
    out.precision(12);
    for (int b = 0; b < bins; ++b) {
        const double left = lo + width * b;
        const double right = b + 1 == bins ? hi : lo + width * (b + 1);
        out << left << "," << right << "," << freq[b] << "\n";
    }
    if (!out) throw DataError("export_histogram: failed writing " + path);
}

}  // namespace dense
