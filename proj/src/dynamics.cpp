// dynamics.cpp — Integrators, exponentials, null-space solves, projected-
// equation consistency

#include "oqs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace oqs {

void TimeGrid::validate() const {
    if (!(t1 > t0)) throw ValidationError("TimeGrid: t1 must exceed t0");
    if (steps < 1) throw ValidationError("TimeGrid: steps must be >= 1");
}

namespace {

// Right-hand side L(t) x without assembling the time-dependent matrix.
struct Rhs {
    Matrix static_mat;
    std::vector<const Matrix*> piece_mats;
    std::vector<double> piece_freqs;

    explicit Rhs(const LiouvillianSpec& spec) : static_mat(spec.static_part().mat) {
        piece_mats.reserve(spec.pieces.size());
        piece_freqs.reserve(spec.pieces.size());
        for (const auto& piece : spec.pieces) {
            piece_mats.push_back(&piece.superop.mat);
            piece_freqs.push_back(piece.freq);
        }
    }

    template <typename Operand>
    Operand operator()(double t, const Operand& x) const {
        Operand out = static_mat * x;
        for (std::size_t k = 0; k < piece_mats.size(); ++k)
            out += std::exp(Complex(0.0, piece_freqs[k] * t)) * (*piece_mats[k] * x);
        return out;
    }
};

// One classical RK4 step for x' = f(t, x).
template <typename Operand, typename F>
Operand rk4_step(const F& f, double t, double h, const Operand& x) {
    Operand k1 = f(t, x);
    Operand k2 = f(t + 0.5 * h, Operand(x + 0.5 * h * k1));
    Operand k3 = f(t + 0.5 * h, Operand(x + 0.5 * h * k2));
    Operand k4 = f(t + h, Operand(x + h * k3));
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Cumulative quadrature on a uniform grid, fourth order: each subinterval
// integrates the cubic through the four nearest nodes. Falls back to the
// trapezoid rule when fewer than four nodes exist.
std::vector<Vector> cumulative_quadrature(const std::vector<Vector>& f, double h) {
    const std::size_t n = f.size();
    std::vector<Vector> integral(n);
    if (n == 0) return integral;
    integral[0] = Vector::Zero(f[0].size());
    if (n < 4) {
        for (std::size_t i = 1; i < n; ++i)
            integral[i] = integral[i - 1] + (h / 2.0) * (f[i - 1] + f[i]);
        return integral;
    }
    for (std::size_t i = 1; i < n; ++i) {
        Vector increment;
        if (i == 1) {
            increment = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        } else if (i == n - 1) {
            increment =
                (h / 24.0) * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
        } else {
            increment =
                (h / 24.0) * (-f[i - 2] + 13.0 * f[i - 1] + 13.0 * f[i] - f[i + 1]);
        }
        integral[i] = integral[i - 1] + increment;
    }
    return integral;
}

} // namespace

Trajectory propagate(const LiouvillianSpec& spec, const DensityMatrix& rho0,
                     const TimeGrid& grid, const std::map<std::string, Matrix>& observables,
                     const ValidationOptions& opts) {
    grid.validate();
    if (rho0.dim() != spec.hilbert_dim)
        throw ValidationError("propagate: initial state dimension does not match the spec");
    for (const auto& [name, op] : observables)
        if (op.rows() != spec.hilbert_dim || op.cols() != spec.hilbert_dim)
            throw ValidationError("propagate: observable '" + name + "' dimension mismatch");

    const Rhs rhs(spec);
    const double h = grid.dt();
    const int d = spec.hilbert_dim;

    Trajectory traj;
    traj.times.reserve(grid.steps + 1);
    traj.states.reserve(grid.steps + 1);
    for (const auto& [name, op] : observables) traj.observables[name].reserve(grid.steps + 1);

    Vector v = vectorize(rho0.mat);
    for (int i = 0; i <= grid.steps; ++i) {
        const double t = grid.time_at(i);
        DensityMatrix state{devectorize(v, d)};
        ValidationReport report = state.validation_report();
        if (!report.ok(opts)) {
            std::ostringstream os;
            os << "propagate: state validation failed at t=" << t << " (" << report.describe()
               << ")";
            throw NumericalError(os.str());
        }
        traj.times.push_back(t);
        for (const auto& [name, op] : observables)
            traj.observables[name].push_back(expectation(op, state.mat));
        traj.states.push_back(std::move(state));
        if (i < grid.steps) v = rk4_step(rhs, t, h, v);
    }
    return traj;
}

SuperOperator superop_exp(const SuperOperator& s, double t) {
    Matrix scaled = s.mat * t;
    return SuperOperator{scaled.exp(), s.hilbert_dim};
}

DensityMatrix steady_state(const SuperOperator& s) {
    const int d = s.hilbert_dim;
    const Eigen::Index n = s.mat.rows();
    if (n < 2) throw ValidationError("steady_state: superoperator too small");

    // only the right singular vectors are needed for the null direction
    Eigen::BDCSVD<Matrix> svd(s.mat, Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double norm = sigma(0);
    if (norm == 0.0 || sigma(n - 2) < 1e-8 * norm)
        throw NumericalError("non-unique steady state: degenerate null space");

    Vector null_vec = svd.matrixV().col(n - 1);
    Matrix x = devectorize(null_vec, d);
    const Complex tr = x.trace();
    // |tr| >= 1/sqrt(d) for a Frobenius-normalized physical steady state; a
    // vanishing trace means the null direction is traceless, not a state.
    if (std::abs(tr) < 1e-10)
        throw NumericalError("trace-normalization failure: null vector has zero trace");
    x *= std::conj(tr) / std::abs(tr); // rotate away the singular-vector phase
    Matrix hermitized = (x + x.adjoint()) / 2.0;
    hermitized /= hermitized.trace().real();
    return DensityMatrix{std::move(hermitized)};
}

NzReport nz_consistency(const LiouvillianSpec& spec, const ProjectorPair& proj,
                        const DensityMatrix& rho_s0, const TimeGrid& grid) {
    grid.validate();
    if (spec.hilbert_dim != proj.space.total_dim())
        throw ValidationError("nz_consistency: spec and projector dimensions differ");
    if (rho_s0.dim() != proj.space.system_dim())
        throw ValidationError("nz_consistency: system state does not match the system factor");

    const int d = spec.hilbert_dim;
    const int n2 = d * d;
    const double h = grid.dt();
    const Matrix& p = proj.p.mat;
    const Matrix& q = proj.q.mat;

    // Full evolution from the uncorrelated initial condition.
    DensityMatrix rho0{kron(rho_s0.mat, proj.bath_state.mat)};
    Trajectory full = propagate(spec, rho0, grid);

    // Propagator dG/dt = Q L(t) G alongside the integrand of the formal
    // solution, with G^{-1} applied through the stored LU factorization.
    const Rhs rhs(spec);
    auto g_rhs = [&](double t, const Matrix& g) -> Matrix { return q * rhs(t, g); };

    NzReport report;
    report.residuals.reserve(grid.steps + 1);

    std::vector<Matrix> g_at(grid.steps + 1);
    std::vector<Vector> integrand(grid.steps + 1);
    Matrix g = Matrix::Identity(n2, n2);
    for (int i = 0; i <= grid.steps; ++i) {
        const double t = grid.time_at(i);
        g_at[i] = g;
        Eigen::PartialPivLU<Matrix> lu(g);
        const double rcond = lu.rcond();
        if (!(rcond > 1e-12))
            throw NumericalError("ill-conditioned propagator: cannot apply G^{-1}");
        Vector v = p * vectorize(full.states[i].mat);
        Vector qlv = q * rhs(t, v);
        integrand[i] = lu.solve(qlv);
        if (i < grid.steps) g = rk4_step(g_rhs, t, h, g);
    }

    std::vector<Vector> accumulated = cumulative_quadrature(integrand, h);
    for (int i = 0; i <= grid.steps; ++i) {
        Vector w = g_at[i] * accumulated[i];
        Vector qrho = q * vectorize(full.states[i].mat);
        report.residuals.push_back((qrho - w).cwiseAbs().maxCoeff());
    }
    report.max_residual = 0.0;
    for (double r : report.residuals) report.max_residual = std::max(report.max_residual, r);
    return report;
}

} // namespace oqs
