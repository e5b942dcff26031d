// reductions.hpp — Reduced system-space generators: the generic second-order
// (Born-type) generator with optional secular filtering, the closed-form
// effective Hamiltonian for a driven Lambda system, and the sideband-cooling
// rates and Lindblad generator for a cavity-cooled mechanical mode.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oqs/superop.hpp"

namespace oqs {

// One tensor-product component of the interaction,
//   V(t) = sum_k S_k (x) B_k * e^{i w_k t}.
struct InteractionPiece {
    Matrix system_op;
    Matrix bath_op;
    double freq = 0.0;
};

struct InteractionSpec {
    std::vector<InteractionPiece> pieces;
    TensorSpace space;

    // max |V_w - V_{-w}^dag| over frequency groups; zero when the pieces close
    // under (S^dag, B^dag, -w) pairing so that V(t) is Hermitian for all t.
    double hermiticity_residual() const;
    void validate(double tol = 1e-10) const;
};

// Operator-Schmidt decomposition of a static full-space operator into
// tensor-product pieces (all at frequency zero).
InteractionSpec decompose_static_interaction(const Matrix& v, const TensorSpace& space);

enum class ReductionMethod { born, fast_bath, sideband };

struct ReducedGenerator {
    SuperOperator generator; // on the system space
    ReductionMethod method = ReductionMethod::born;
    std::map<std::string, double> rates; // "gamma_h", "gamma_c", "delta_m" where applicable
    std::vector<std::string> warnings;
};

// Mean-field split: the driving part Tr_B[rho_B V(t)] moves into the system
// Hamiltonian, leaving bath operators with vanishing reference expectation.
struct ShiftPiece {
    Matrix op; // system space
    double freq = 0.0;
};

struct MeanFieldSplit {
    std::vector<ShiftPiece> shift; // sum_k S_k <B_k> e^{i w_k t}, grouped by frequency
    InteractionSpec interaction;   // bath operators replaced by B_k - <B_k> I
};

MeanFieldSplit mean_field_split(const InteractionSpec& v, const DensityMatrix& bath_state);

// Second-order bath-induced generator
//   R(.) = sum_{k,k'} Tr_B[ C_k (-(L_B - i w')^{-1}) Q C_{k'} ((.) (x) rho_B) ],
// with C_k the commutator map of piece k, w' the oscillation frequency of the
// inner piece, and Q = I - P. The bath resolvent realizes the Markov integral
// exactly; it covers both decaying baths and detuned lossless baths. With
// secular on, only piece pairs with w_k + w_{k'} = 0 (within 1e-9) are kept;
// with secular off the generator is the t = 0 snapshot of all pairs.
//
// Requires Tr_B[rho_B V(t)] = 0 (apply mean_field_split first). When
// reference_freq is given, sideband rates are extracted from the generator's
// action on the lowest Fock-block matrix units.
ReducedGenerator second_order_generator(const SuperOperator& bath_generator,
                                        const InteractionSpec& v,
                                        const DensityMatrix& bath_state, bool secular,
                                        std::optional<double> reference_freq = {});

// Rates read off a generator of sideband Lindblad form: gamma_h from the
// action on |0><0|, gamma_c from |1><1|, delta_m from the |0><1| coherence.
struct SidebandRates {
    double gamma_h = 0.0;
    double gamma_c = 0.0;
    double delta_m = 0.0;
};

SidebandRates extract_sideband_rates(const SuperOperator& generator);

// ---------------------------------------------------------------------------
// Lambda system (two driven ground states, one far-detuned excited state)

struct LambdaParams {
    Complex omega_a{0.0, 0.0}; // drive rates, angular
    Complex omega_b{0.0, 0.0};
    double delta = 0.0;    // detuning difference delta_a - delta_b
    double bigdelta = 0.0; // average detuning (delta_a + delta_b)/2

    bool in_adiabatic_regime() const; // |bigdelta| >= 10 max(|delta|, |omega_a|, |omega_b|)
};

// 2x2 effective Hamiltonian on {|a>, |b>}:
//   diag(-delta/2 - |Oa|^2/4D, +delta/2 - |Ob|^2/4D)
//   - [ (Oa Ob^* / 4D) |a><b| + h.c. ].
Matrix lambda_effective_hamiltonian(const LambdaParams& p);

// ---------------------------------------------------------------------------
// Optomechanical sideband cooling

struct OptomechParams {
    double omega_m = 1.0; // mechanical frequency, > 0
    double delta = 0.0;   // cavity drive detuning
    double kappa = 1.0;   // cavity linewidth, > 0
    double gamma_m = 0.0; // mechanical linewidth, >= 0
    double nbar = 0.0;    // reservoir occupation, >= 0
    Complex g{0.0, 0.0};  // linearized coupling
    int n_cav = 2;        // cavity Fock cutoff
    int n_mech = 2;       // mechanical Fock cutoff

    void validate() const;
};

// E_lambda(w) = 1 / (i (delta + lambda w) + kappa/2), lambda = +-1.
Complex sideband_spectral(double delta, double kappa, double omega, int lam);

// Gamma_h = |g|^2 kappa / ((delta + Om)^2 + (kappa/2)^2)
// Gamma_c = |g|^2 kappa / ((delta - Om)^2 + (kappa/2)^2)
// Delta_m = |g|^2 Im[E_+(Om) + E_-(Om)]
SidebandRates sideband_rates(const OptomechParams& p);

// -i [Delta_m b^dag b, .] + (gamma_m nbar + Gamma_h) D_{b^dag}
//                         + (gamma_m (nbar+1) + Gamma_c) D_b
// on the truncated mechanical space.
ReducedGenerator sideband_generator(const OptomechParams& p);

// (gamma_m nbar + Gamma_h) / (gamma_m + Gamma_c - Gamma_h)
double steady_occupation(const OptomechParams& p);

// 4 |g|^2 / (kappa gamma_m)
double cooperativity(const OptomechParams& p);

} // namespace oqs
