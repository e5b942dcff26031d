// liouvillian.hpp — Assembling labeled Liouvillians, the P/Q projector pair,
// and the structural identities they are supposed to satisfy.

#pragma once

#include <vector>

#include "oqs/superop.hpp"

namespace oqs {

// Which of the three standard contributions a term belongs to. The split is a
// modeling choice (a mean-field reshuffle moves terms between system and
// interaction), so it is explicit metadata, never inferred.
enum class Part { system, bath, interaction };

struct LindbladTerm {
    Matrix jump;
    double rate = 0.0; // angular frequency units, >= 0
};

// superop * exp(i * freq * t)
struct OscillatoryPiece {
    SuperOperator superop;
    double freq = 0.0;
    Part label = Part::interaction;
};

struct LabeledStatic {
    SuperOperator superop;
    Part label = Part::system;
};

// L(t) = sum of labeled static parts + sum_k pieces[k].superop * e^{i w_k t}.
// Time dependence is restricted to finite sums of complex exponentials; pieces
// must come in conjugate pairs whenever the total is Hermitian-generated.
struct LiouvillianSpec {
    int hilbert_dim = 0;
    std::vector<LabeledStatic> static_parts;
    std::vector<OscillatoryPiece> pieces;

    SuperOperator static_part() const;         // sum of all static contributions
    SuperOperator static_part(Part label) const; // sum of static parts with one label

    // max |generator(t) applied to a random Hermitian| deviation from a
    // traceless Hermitian result; used by tests and model builders.
    double generator_residual(double t, const Matrix& probe) const;
};

SuperOperator evaluate_at(const LiouvillianSpec& spec, double t);

// commutator_superop(h) + sum of dissipators. h must be Hermitian.
SuperOperator assemble_static(const Matrix& h, const std::vector<LindbladTerm>& terms);

struct ProjectorPair {
    SuperOperator p;
    SuperOperator q;
    DensityMatrix bath_state;
    TensorSpace space;
};

// P: X -> Tr_B[X] (x) rho_B (system factor first); Q = identity - P.
ProjectorPair build_projector(const DensityMatrix& bath_state, const TensorSpace& space);

// Max-entry residuals of the projector identities that hold for a steady-bath
// product projector. A nonzero residual is reported, not thrown; negative
// controls rely on that.
struct StructureReport {
    double ls_p_commutator = 0.0;   // [L_S, P]
    double lb_p = 0.0;              // L_B P
    double p_lb = 0.0;              // P L_B
    double p_lint_p = 0.0;          // P L_Int P
    double bath_stationarity = 0.0; // L_B applied to a product state with rho_B

    double max_residual() const;
};

StructureReport check_structure(const LiouvillianSpec& spec, const ProjectorPair& proj);

} // namespace oqs
