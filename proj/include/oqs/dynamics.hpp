// dynamics.hpp — Master-equation integration, superoperator exponentials,
// steady states, and the propagator-based consistency check for the exact
// projected equation of motion.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "oqs/liouvillian.hpp"

namespace oqs {

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int steps = 1; // uniform

    double dt() const { return (t1 - t0) / steps; }
    double time_at(int i) const { return t0 + dt() * i; }
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::map<std::string, std::vector<Complex>> observables;
};

// Validation applied to every recorded state; the positivity floor is widened
// relative to the plain density-matrix invariant to absorb integration error.
inline ValidationOptions trajectory_validation() {
    ValidationOptions opts;
    opts.eigenvalue_floor = -1e-6;
    return opts;
}

// Classical fixed-step RK4 on the vectorized state. Records the state and the
// requested expectation values at every grid node and validates each recorded
// state, reporting the offending time on failure.
Trajectory propagate(const LiouvillianSpec& spec, const DensityMatrix& rho0,
                     const TimeGrid& grid,
                     const std::map<std::string, Matrix>& observables = {},
                     const ValidationOptions& opts = trajectory_validation());

// exp(s * t) by scaling-and-squaring with a Pade approximant.
SuperOperator superop_exp(const SuperOperator& s, double t);

// Unique null vector of s (smallest-singular-value direction), Hermitized as
// (X + X^dag)/2 and trace-normalized. Uniqueness is verified by a spectral-gap
// check on the singular values.
DensityMatrix steady_state(const SuperOperator& s);

// Residual of Q rho(t) against the formal solution
//   w(t) = G(t) * integral_0^t G^{-1}(t') Q L(t') v(t') dt',   v = P rho,
// with dG/dt = Q L(t) G, G(0) = I, starting from rho_S0 (x) rho_B (so w(0)=0).
// G is never inverted explicitly; each quadrature node solves against the
// stored LU factorization.
struct NzReport {
    double max_residual = 0.0;
    std::vector<double> residuals; // one per grid node
};

NzReport nz_consistency(const LiouvillianSpec& spec, const ProjectorPair& proj,
                        const DensityMatrix& rho_s0, const TimeGrid& grid);

} // namespace oqs
