// models.hpp — The two worked examples (driven Lambda system, linearized
// optomechanical cavity cooling), a seeded random bipartite model for
// consistency and scaling tests, and generic Fock-space building blocks.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oqs/liouvillian.hpp"
#include "oqs/reductions.hpp"

namespace oqs {

// (n x n) lowering operator with <k-1| a |k> = sqrt(k).
Matrix fock_annihilation(int n);

// Truncated, renormalized thermal state, diagonal ~ (nbar/(nbar+1))^k.
DensityMatrix thermal_state(int n, double nbar);

// ---------------------------------------------------------------------------
// Lambda system
//
// Physical space: three levels ordered |a>, |b>, |e>. The reduction machinery
// instead sees a product space: a 3-dim ground-manifold factor {|a>, |b>,
// |vac>} (the single-excitation sector of an auxiliary bosonic embedding of
// the two ground states) times a 2-dim excited-like factor {|0_e>, |e>}. The
// jump operator S = sum_j (Omega_j/2) |vac><j| lowers into the auxiliary
// vacuum; the interaction is V = S (x) e^dag + S^dag (x) e.
struct LambdaModel {
    Matrix h_full;            // 3x3, rotating frame, basis |a>, |b>, |e>
    Matrix h_s;               // 2x2 system block on {|a>, |b>}
    InteractionSpec interaction;  // on the [3, 2] product space
    DensityMatrix bath_state;     // |0_e><0_e|
    SuperOperator bath_generator; // -i [Delta |e><e|, .] on the 2-dim factor
    LiouvillianSpec enlarged;     // labeled spec on the product space
    TensorSpace space;            // {3, 2}
    std::vector<std::string> warnings;
};

LambdaModel build_lambda(const LambdaParams& p);

// ---------------------------------------------------------------------------
// Optomechanics (mechanical mode = system factor, cavity = bath factor)

struct OptomechModel {
    LiouvillianSpec spec_schrodinger; // static, frame rotating at the drive
    LiouvillianSpec spec_interaction; // mechanical interaction picture, pieces at +-Omega_m
    std::map<std::string, Matrix> ops; // "a", "b", "num_cav", "num_mech" on the full space
    TensorSpace space;                 // {n_mech, n_cav}
    InteractionSpec interaction;       // pieces (b, g a + g* a^dag, -Om), (b^dag, ..., +Om)
    DensityMatrix bath_state;          // cavity vacuum
    SuperOperator bath_generator;      // -i [delta a^dag a, .] + kappa D_a on the cavity
    std::vector<std::string> warnings;
};

OptomechModel build_optomech(const OptomechParams& p);

// ---------------------------------------------------------------------------
// Seeded random 2 (x) 2 model: random Hermitian H_S, H_B and interaction V
// rescaled to declared spectral norms, bath decay through the qubit lowering
// operator, reference state = the bath steady state, interaction mean-field
// split against it. Deterministic for a fixed seed.
struct RandomBipartiteParams {
    double hs_norm = 1.0;
    double hb_norm = 1.0;
    double v_norm = 1.0;
    double bath_rate = 1.0;
};

struct RandomBipartiteModel {
    LiouvillianSpec spec;        // labeled, on the 4-dim product space
    InteractionSpec interaction; // after the mean-field split
    Matrix h_system;             // H_S + mean-field shift, 2x2
    DensityMatrix bath_state;
    SuperOperator bath_generator;
    TensorSpace space; // {2, 2}
};

RandomBipartiteModel build_random_bipartite(std::uint64_t seed,
                                            const RandomBipartiteParams& params = {});

} // namespace oqs
