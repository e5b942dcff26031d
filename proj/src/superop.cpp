// superop.cpp — Implementation of the dense superoperator primitives

#include "oqs/superop.hpp"

#include <cmath>
#include <sstream>

namespace oqs {

double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

double hermitian_spectral_norm(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

TensorSpace::TensorSpace(int dim_system, int dim_bath) : dims{dim_system, dim_bath} {
    if (dim_system < 1 || dim_bath < 1)
        throw ValidationError("TensorSpace: factor dimensions must be >= 1");
}

bool ValidationReport::ok(const ValidationOptions& opts) const {
    return finite && hermiticity <= opts.hermiticity_tol &&
           trace_deviation <= opts.trace_tol && min_eigenvalue >= opts.eigenvalue_floor;
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    os << "hermiticity=" << hermiticity << " trace_deviation=" << trace_deviation
       << " min_eigenvalue=" << min_eigenvalue << (finite ? "" : " non-finite entries");
    return os.str();
}

ValidationReport DensityMatrix::validation_report() const {
    ValidationReport report;
    report.finite = all_finite(mat);
    if (!report.finite || mat.rows() != mat.cols() || mat.rows() == 0) {
        report.finite = false;
        return report;
    }
    report.hermiticity = hermiticity_residual(mat);
    report.trace_deviation = std::abs(mat.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es((mat + mat.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = es.eigenvalues().minCoeff();
    return report;
}

DensityMatrix DensityMatrix::validated(Matrix m, const ValidationOptions& opts) {
    DensityMatrix rho{std::move(m)};
    ValidationReport report = rho.validation_report();
    if (!report.ok(opts))
        throw ValidationError("density matrix validation failed: " + report.describe());
    return rho;
}

SuperOperator SuperOperator::zero(int hilbert_dim) {
    return SuperOperator{Matrix::Zero(hilbert_dim * hilbert_dim, hilbert_dim * hilbert_dim),
                         hilbert_dim};
}

SuperOperator SuperOperator::identity(int hilbert_dim) {
    return SuperOperator{Matrix::Identity(hilbert_dim * hilbert_dim, hilbert_dim * hilbert_dim),
                         hilbert_dim};
}

Matrix SuperOperator::apply(const Matrix& x) const {
    if (x.rows() != hilbert_dim || x.cols() != hilbert_dim)
        throw ValidationError("SuperOperator::apply: operand dimension mismatch");
    return devectorize(mat * vectorize(x), hilbert_dim);
}

namespace {

void require_same_dim(const SuperOperator& a, const SuperOperator& b, const char* op) {
    if (a.hilbert_dim != b.hilbert_dim)
        throw ValidationError(std::string("SuperOperator ") + op + ": dimension mismatch");
}

} // namespace

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
    require_same_dim(a, b, "+");
    return SuperOperator{a.mat + b.mat, a.hilbert_dim};
}

SuperOperator operator-(const SuperOperator& a, const SuperOperator& b) {
    require_same_dim(a, b, "-");
    return SuperOperator{a.mat - b.mat, a.hilbert_dim};
}

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
    require_same_dim(a, b, "*");
    return SuperOperator{a.mat * b.mat, a.hilbert_dim};
}

SuperOperator operator*(Complex scale, const SuperOperator& s) {
    return SuperOperator{scale * s.mat, s.hilbert_dim};
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector vectorize(const Matrix& m) {
    if (m.rows() != m.cols())
        throw ValidationError("vectorize: matrix must be square");
    // Eigen stores column-major, so the raw buffer is already column-stacked.
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix devectorize(const Vector& v, int dim) {
    if (static_cast<Eigen::Index>(dim) * dim != v.size())
        throw ValidationError("devectorize: length is not dim^2");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

SuperOperator left_multiply_superop(const Matrix& a) {
    if (a.rows() != a.cols())
        throw ValidationError("left_multiply_superop: matrix must be square");
    const int d = static_cast<int>(a.rows());
    return SuperOperator{kron(Matrix::Identity(d, d), a), d};
}

SuperOperator right_multiply_superop(const Matrix& a) {
    if (a.rows() != a.cols())
        throw ValidationError("right_multiply_superop: matrix must be square");
    const int d = static_cast<int>(a.rows());
    return SuperOperator{kron(a.transpose(), Matrix::Identity(d, d)), d};
}

SuperOperator commutator_piece(const Matrix& a) {
    SuperOperator s = left_multiply_superop(a) - right_multiply_superop(a);
    return Complex(0.0, -1.0) * s;
}

SuperOperator commutator_superop(const Matrix& h) {
    if (h.rows() != h.cols())
        throw ValidationError("commutator_superop: matrix must be square");
    if (hermiticity_residual(h) > 1e-10)
        throw ValidationError("commutator_superop: Hamiltonian is not Hermitian");
    return commutator_piece(h);
}

SuperOperator dissipator_superop(const Matrix& a, double rate) {
    if (a.rows() != a.cols())
        throw ValidationError("dissipator_superop: jump operator must be square");
    if (rate < 0.0)
        throw ValidationError("dissipator_superop: rate must be nonnegative");
    const int d = static_cast<int>(a.rows());
    const Matrix adag_a = a.adjoint() * a;
    const Matrix eye = Matrix::Identity(d, d);
    Matrix m = kron(a.conjugate(), a);
    m -= 0.5 * kron(eye, adag_a);
    m -= 0.5 * kron(adag_a.transpose(), eye);
    return SuperOperator{rate * m, d};
}

Matrix partial_trace(const Matrix& rho, const TensorSpace& space, int keep) {
    const int ds = space.system_dim();
    const int db = space.bath_dim();
    if (rho.rows() != rho.cols() || rho.rows() != space.total_dim())
        throw ValidationError("partial_trace: state dimension does not match the tensor space");
    if (keep != 0 && keep != 1)
        throw ValidationError("partial_trace: keep index must be 0 (system) or 1 (bath)");

    if (keep == 0) {
        Matrix out = Matrix::Zero(ds, ds);
        for (int s = 0; s < ds; ++s)
            for (int sp = 0; sp < ds; ++sp)
                for (int b = 0; b < db; ++b)
                    out(s, sp) += rho(s * db + b, sp * db + b);
        return out;
    }
    Matrix out = Matrix::Zero(db, db);
    for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp)
            for (int s = 0; s < ds; ++s)
                out(b, bp) += rho(s * db + b, s * db + bp);
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const TensorSpace& space, int keep) {
    return DensityMatrix{partial_trace(rho.mat, space, keep)};
}

Complex expectation(const Matrix& o, const Matrix& rho) {
    if (o.rows() != rho.rows() || o.cols() != rho.cols())
        throw ValidationError("expectation: dimension mismatch");
    return (o * rho).trace();
}

Complex expectation(const Matrix& o, const DensityMatrix& rho) {
    return expectation(o, rho.mat);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        throw ValidationError("trace_distance: dimension mismatch");
    Matrix diff = a.mat - b.mat;
    diff = (diff + diff.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace oqs
