// superop.hpp — Dense complex matrix primitives, the vectorization convention,
// and the elementary superoperator constructors everything else builds on.
//
// Conventions fixed here, once, for the whole library:
//   * hbar = 1; every Hamiltonian is an angular-frequency matrix.
//   * Column stacking: a d x d matrix maps to a d^2 column with entry (i, j)
//     at index i + j*d, so that vec(A X B) = kron(B^T, A) vec(X).
//   * Tensor products are system-factor-first: the full space is S (x) B.

#pragma once

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "oqs/errors.hpp"

namespace oqs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Small helpers

// Largest |entry|; zero for empty matrices.
double max_abs(const Matrix& m);

// max |M - M^dagger| entrywise.
double hermiticity_residual(const Matrix& m);

bool all_finite(const Matrix& m);

// Spectral norm (largest |eigenvalue|) of a Hermitian matrix.
double hermitian_spectral_norm(const Matrix& m);

// ---------------------------------------------------------------------------
// Domain types

// Bipartite factorization of the Hilbert space, system factor first.
struct TensorSpace {
    std::array<int, 2> dims{1, 1}; // {d_S, d_B}

    TensorSpace() = default;
    TensorSpace(int dim_system, int dim_bath);

    int system_dim() const { return dims[0]; }
    int bath_dim() const { return dims[1]; }
    int total_dim() const { return dims[0] * dims[1]; }
};

struct ValidationOptions {
    double hermiticity_tol = 1e-10;
    double trace_tol = 1e-10;
    double eigenvalue_floor = -1e-8;
};

struct ValidationReport {
    double hermiticity = 0.0;   // max |M - M^dagger|
    double trace_deviation = 0.0; // |Tr M - 1|
    double min_eigenvalue = 0.0;
    bool finite = true;

    bool ok(const ValidationOptions& opts = {}) const;
    std::string describe() const;
};

// A density matrix is stored as a plain value; validation reports violations,
// it never repairs them.
struct DensityMatrix {
    Matrix mat;

    int dim() const { return static_cast<int>(mat.rows()); }

    ValidationReport validation_report() const;

    // Throws ValidationError when the invariants fail at the given tolerances.
    static DensityMatrix validated(Matrix m, const ValidationOptions& opts = {});
};

// Dense d^2 x d^2 matrix acting on column-stacked density matrices.
struct SuperOperator {
    Matrix mat;
    int hilbert_dim = 0;

    static SuperOperator zero(int hilbert_dim);
    static SuperOperator identity(int hilbert_dim);

    // devectorize(mat * vectorize(x))
    Matrix apply(const Matrix& x) const;
};

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator-(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator*(const SuperOperator& a, const SuperOperator& b); // composition
SuperOperator operator*(Complex scale, const SuperOperator& s);

// ---------------------------------------------------------------------------
// Core operations

Matrix kron(const Matrix& a, const Matrix& b);

Vector vectorize(const Matrix& m);
Matrix devectorize(const Vector& v, int dim);

// Superoperators of X -> A X and X -> X A under the column-stacking convention.
SuperOperator left_multiply_superop(const Matrix& a);
SuperOperator right_multiply_superop(const Matrix& a);

// -i [h, .] for Hermitian h (checked to 1e-10).
SuperOperator commutator_superop(const Matrix& h);

// -i [a, .] for a single (not necessarily Hermitian) exponential component of
// an interaction; pieces like this must pair up into a Hermitian total.
SuperOperator commutator_piece(const Matrix& a);

// rate * (A . A^dag - 1/2 {A^dag A, .})
SuperOperator dissipator_superop(const Matrix& a, double rate);

// Partial trace over one factor of a bipartite space; keep = 0 retains the
// system factor, keep = 1 the bath factor.
Matrix partial_trace(const Matrix& rho, const TensorSpace& space, int keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const TensorSpace& space, int keep);

// Tr(o * rho)
Complex expectation(const Matrix& o, const DensityMatrix& rho);
Complex expectation(const Matrix& o, const Matrix& rho);

// 1/2 sum |eigenvalues(a - b)|
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

} // namespace oqs
