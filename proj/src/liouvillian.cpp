// liouvillian.cpp — Labeled Liouvillians, projectors, structure checks

#include "oqs/liouvillian.hpp"

#include <algorithm>
#include <cmath>

namespace oqs {

SuperOperator LiouvillianSpec::static_part() const {
    SuperOperator sum = SuperOperator::zero(hilbert_dim);
    for (const auto& part : static_parts) sum = sum + part.superop;
    return sum;
}

SuperOperator LiouvillianSpec::static_part(Part label) const {
    SuperOperator sum = SuperOperator::zero(hilbert_dim);
    for (const auto& part : static_parts)
        if (part.label == label) sum = sum + part.superop;
    return sum;
}

double LiouvillianSpec::generator_residual(double t, const Matrix& probe) const {
    Matrix hermitian_probe = (probe + probe.adjoint()) / 2.0;
    Matrix out = evaluate_at(*this, t).apply(hermitian_probe);
    double residual = std::abs(out.trace());
    residual = std::max(residual, hermiticity_residual(out));
    return residual;
}

SuperOperator evaluate_at(const LiouvillianSpec& spec, double t) {
    SuperOperator out = spec.static_part();
    for (const auto& piece : spec.pieces) {
        const Complex phase = std::exp(Complex(0.0, piece.freq * t));
        out = out + phase * piece.superop;
    }
    return out;
}

SuperOperator assemble_static(const Matrix& h, const std::vector<LindbladTerm>& terms) {
    SuperOperator out = commutator_superop(h);
    for (const auto& term : terms) {
        if (term.jump.rows() != h.rows() || term.jump.cols() != h.cols())
            throw ValidationError("assemble_static: jump operator dimension mismatch");
        out = out + dissipator_superop(term.jump, term.rate);
    }
    return out;
}

ProjectorPair build_projector(const DensityMatrix& bath_state, const TensorSpace& space) {
    if (bath_state.dim() != space.bath_dim())
        throw ValidationError("build_projector: bath state does not match the bath factor");
    ValidationReport report = bath_state.validation_report();
    if (!report.ok())
        throw ValidationError("build_projector: bath state fails density matrix validation: " +
                              report.describe());

    const int ds = space.system_dim();
    const int db = space.bath_dim();
    const int d = space.total_dim();
    const Matrix& rho_b = bath_state.mat;

    // Column c of P is vec(Tr_B[E_mn] (x) rho_B) for the full-space matrix
    // unit E_mn with m = (s, b), n = (s', b'). The partial trace of E_mn is
    // delta_{b b'} E^S_{s s'}, so each column has at most db^2 nonzeros.
    Matrix p = Matrix::Zero(d * d, d * d);
    for (int sp = 0; sp < ds; ++sp)
        for (int bp = 0; bp < db; ++bp)
            for (int s = 0; s < ds; ++s)
                for (int b = 0; b < db; ++b) {
                    if (b != bp) continue;
                    const Eigen::Index col = (s * db + b) + static_cast<Eigen::Index>(sp * db + bp) * d;
                    for (int beta_p = 0; beta_p < db; ++beta_p)
                        for (int beta = 0; beta < db; ++beta) {
                            const Eigen::Index row =
                                (s * db + beta) + static_cast<Eigen::Index>(sp * db + beta_p) * d;
                            p(row, col) = rho_b(beta, beta_p);
                        }
                }

    SuperOperator proj_p{std::move(p), d};
    SuperOperator proj_q = SuperOperator::identity(d) - proj_p;
    return ProjectorPair{std::move(proj_p), std::move(proj_q), bath_state, space};
}

double StructureReport::max_residual() const {
    return std::max({ls_p_commutator, lb_p, p_lb, p_lint_p, bath_stationarity});
}

StructureReport check_structure(const LiouvillianSpec& spec, const ProjectorPair& proj) {
    if (spec.hilbert_dim != proj.space.total_dim())
        throw ValidationError("check_structure: spec and projector dimensions differ");
    for (const auto& piece : spec.pieces)
        if (piece.label == Part::bath)
            throw ValidationError("check_structure: time-dependent bath Liouvillians are not supported");

    const int ds = proj.space.system_dim();
    const int db = proj.space.bath_dim();
    const int d = spec.hilbert_dim;
    const int ns = ds * ds;
    const int nb = db * db;

    // On vectorized full-space matrices, P acts block-diagonally on the bath
    // indices of each system index pair as the rank-one map p_B = u w^T with
    // u = vec(rho_B) and w = vec(I_B). Working block-wise keeps the residuals
    // exact while avoiding d^2 x d^2 matrix products.
    const Vector u = vectorize(proj.bath_state.mat);
    Vector w = vectorize(Matrix::Identity(db, db));
    const double u_max = u.cwiseAbs().maxCoeff();

    auto full_index = [&](int is, int ib) -> Eigen::Index {
        const int s = is % ds, sp = is / ds;
        const int beta = ib % db, beta_p = ib / db;
        return (s * db + beta) + static_cast<Eigen::Index>(sp * db + beta_p) * d;
    };

    StructureReport report;

    // The identities must hold for every exponential coefficient separately,
    // so each labeled contribution is checked on its own.
    auto for_each_labeled = [&](Part label, auto&& fn) {
        for (const auto& part : spec.static_parts)
            if (part.label == label) fn(part.superop.mat);
        for (const auto& piece : spec.pieces)
            if (piece.label == label) fn(piece.superop.mat);
    };

    Matrix block(nb, nb);
    auto for_each_block = [&](const Matrix& m, auto&& fn) {
        for (int is_r = 0; is_r < ns; ++is_r)
            for (int is_c = 0; is_c < ns; ++is_c) {
                for (int ib_c = 0; ib_c < nb; ++ib_c) {
                    const Eigen::Index col = full_index(is_c, ib_c);
                    for (int ib_r = 0; ib_r < nb; ++ib_r)
                        block(ib_r, ib_c) = m(full_index(is_r, ib_r), col);
                }
                fn(block);
            }
    };

    for_each_labeled(Part::system, [&](const Matrix& m) {
        for_each_block(m, [&](const Matrix& blk) {
            const Vector x = blk * u;        // (M p)_block = x w^T
            const Vector y = blk.adjoint() * w; // (p M)_block = u (y^dag)
            double residual = 0.0;
            for (int j = 0; j < nb; ++j)
                for (int i = 0; i < nb; ++i)
                    residual = std::max(residual,
                                        std::abs(x(i) * w(j) - u(i) * std::conj(y(j))));
            report.ls_p_commutator = std::max(report.ls_p_commutator, residual);
        });
    });
    for_each_labeled(Part::bath, [&](const Matrix& m) {
        for_each_block(m, [&](const Matrix& blk) {
            const Vector x = blk * u;
            const Vector y = blk.adjoint() * w;
            report.lb_p = std::max(report.lb_p, x.cwiseAbs().maxCoeff());
            report.p_lb = std::max(report.p_lb, u_max * y.cwiseAbs().maxCoeff());
        });
    });
    for_each_labeled(Part::interaction, [&](const Matrix& m) {
        for_each_block(m, [&](const Matrix& blk) {
            const Complex c = w.dot(blk * u); // w^dag M u (w is real)
            report.p_lint_p = std::max(report.p_lint_p, std::abs(c) * u_max);
        });
    });

    const Matrix probe =
        kron(Matrix::Identity(ds, ds) / static_cast<double>(ds), proj.bath_state.mat);
    report.bath_stationarity = max_abs(spec.static_part(Part::bath).apply(probe));

    return report;
}

} // namespace oqs
