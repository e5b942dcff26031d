// reductions.cpp — Second-order generator engine and the closed-form
// reductions it is checked against

#include "oqs/reductions.hpp"

#include <algorithm>
#include <cmath>

#include "oqs/models.hpp"

namespace oqs {

namespace {

constexpr double kFreqMatchTol = 1e-9; // secular and grouping tolerance, absolute

// Group piece indices by frequency (within kFreqMatchTol).
std::vector<std::pair<double, std::vector<std::size_t>>> group_by_freq(
    const std::vector<InteractionPiece>& pieces) {
    std::vector<std::pair<double, std::vector<std::size_t>>> groups;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        bool placed = false;
        for (auto& [freq, members] : groups) {
            if (std::abs(freq - pieces[k].freq) <= kFreqMatchTol) {
                members.push_back(k);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({pieces[k].freq, {k}});
    }
    return groups;
}

} // namespace

double InteractionSpec::hermiticity_residual() const {
    auto groups = group_by_freq(pieces);
    const int d = space.total_dim();
    double residual = 0.0;
    for (const auto& [freq, members] : groups) {
        Matrix v_here = Matrix::Zero(d, d);
        for (std::size_t k : members)
            v_here += kron(pieces[k].system_op, pieces[k].bath_op);
        Matrix v_mirror = Matrix::Zero(d, d);
        for (const auto& [freq2, members2] : groups) {
            if (std::abs(freq2 + freq) > kFreqMatchTol) continue;
            for (std::size_t k : members2)
                v_mirror += kron(pieces[k].system_op, pieces[k].bath_op);
        }
        residual = std::max(residual, max_abs(v_here - v_mirror.adjoint()));
    }
    return residual;
}

void InteractionSpec::validate(double tol) const {
    for (const auto& piece : pieces) {
        if (piece.system_op.rows() != space.system_dim() ||
            piece.system_op.cols() != space.system_dim())
            throw ValidationError("InteractionSpec: system operator dimension mismatch");
        if (piece.bath_op.rows() != space.bath_dim() || piece.bath_op.cols() != space.bath_dim())
            throw ValidationError("InteractionSpec: bath operator dimension mismatch");
    }
    if (hermiticity_residual() > tol)
        throw ValidationError("InteractionSpec: pieces do not close under Hermitian pairing");
}

InteractionSpec decompose_static_interaction(const Matrix& v, const TensorSpace& space) {
    const int ds = space.system_dim();
    const int db = space.bath_dim();
    if (v.rows() != space.total_dim() || v.cols() != space.total_dim())
        throw ValidationError("decompose_static_interaction: dimension mismatch");

    // Reshuffle V_{(s b),(s' b')} into M_{(s + s' ds),(b + b' db)} and read the
    // Schmidt pieces off its SVD.
    Matrix m(ds * ds, db * db);
    for (int s = 0; s < ds; ++s)
        for (int sp = 0; sp < ds; ++sp)
            for (int b = 0; b < db; ++b)
                for (int bp = 0; bp < db; ++bp)
                    m(s + sp * ds, b + bp * db) = v(s * db + b, sp * db + bp);

    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = sigma.size() ? sigma(0) * 1e-13 : 0.0;

    InteractionSpec spec;
    spec.space = space;
    for (Eigen::Index alpha = 0; alpha < sigma.size(); ++alpha) {
        if (sigma(alpha) <= cutoff) break;
        const double scale = std::sqrt(sigma(alpha));
        InteractionPiece piece;
        piece.system_op = scale * devectorize(svd.matrixU().col(alpha), ds);
        piece.bath_op = scale * devectorize(svd.matrixV().col(alpha).conjugate(), db);
        piece.freq = 0.0;
        spec.pieces.push_back(std::move(piece));
    }
    return spec;
}

MeanFieldSplit mean_field_split(const InteractionSpec& v, const DensityMatrix& bath_state) {
    if (bath_state.dim() != v.space.bath_dim())
        throw ValidationError("mean_field_split: bath state does not match the bath factor");

    MeanFieldSplit out;
    out.interaction.space = v.space;

    std::vector<Complex> expectations(v.pieces.size());
    for (std::size_t k = 0; k < v.pieces.size(); ++k)
        expectations[k] = (bath_state.mat * v.pieces[k].bath_op).trace();

    const int ds = v.space.system_dim();
    const int db = v.space.bath_dim();
    for (const auto& [freq, members] : group_by_freq(v.pieces)) {
        Matrix shift = Matrix::Zero(ds, ds);
        for (std::size_t k : members) shift += expectations[k] * v.pieces[k].system_op;
        if (max_abs(shift) > 0.0) out.shift.push_back(ShiftPiece{std::move(shift), freq});
    }

    const Matrix eye_b = Matrix::Identity(db, db);
    for (std::size_t k = 0; k < v.pieces.size(); ++k) {
        InteractionPiece piece = v.pieces[k];
        piece.bath_op -= expectations[k] * eye_b;
        out.interaction.pieces.push_back(std::move(piece));
    }
    return out;
}

SidebandRates extract_sideband_rates(const SuperOperator& generator) {
    const int d = generator.hilbert_dim;
    if (d < 2) throw ValidationError("extract_sideband_rates: need at least two Fock levels");
    Matrix unit = Matrix::Zero(d, d);

    unit(0, 0) = 1.0; // |0><0|
    Matrix image = generator.apply(unit);
    SidebandRates rates;
    rates.gamma_h = image(1, 1).real();

    unit.setZero();
    unit(1, 1) = 1.0; // |1><1|
    image = generator.apply(unit);
    rates.gamma_c = image(0, 0).real();

    unit.setZero();
    unit(0, 1) = 1.0; // |0><1|
    image = generator.apply(unit);
    rates.delta_m = image(0, 1).imag();
    return rates;
}

ReducedGenerator second_order_generator(const SuperOperator& bath_generator,
                                        const InteractionSpec& v,
                                        const DensityMatrix& bath_state, bool secular,
                                        std::optional<double> reference_freq) {
    const int ds = v.space.system_dim();
    const int db = v.space.bath_dim();
    if (bath_generator.hilbert_dim != db)
        throw ValidationError("second_order_generator: bath generator dimension mismatch");
    if (bath_state.dim() != db)
        throw ValidationError("second_order_generator: bath state dimension mismatch");
    v.validate();

    // Precondition: the interaction carries no pure driving term, i.e.
    // Tr_B[rho_B V(t)] = 0 for all t, checked per frequency group.
    {
        MeanFieldSplit split = mean_field_split(v, bath_state);
        double residual = 0.0;
        for (const auto& piece : split.shift) residual = std::max(residual, max_abs(piece.op));
        if (residual > 1e-10)
            throw ValidationError(
                "second_order_generator: interaction has a nonzero bath expectation "
                "(apply mean_field_split first); residual " +
                std::to_string(residual));
    }

    ReducedGenerator out;
    out.generator = SuperOperator::zero(ds);
    out.method = (secular && reference_freq) ? ReductionMethod::sideband : ReductionMethod::born;

    std::vector<Matrix> full_ops;
    full_ops.reserve(v.pieces.size());
    for (const auto& piece : v.pieces)
        full_ops.push_back(kron(piece.system_op, piece.bath_op));

    const Complex minus_i(0.0, -1.0);
    bool any_pair = false;

    for (std::size_t kin = 0; kin < v.pieces.size(); ++kin) {
        const double freq_in = v.pieces[kin].freq;

        std::vector<std::size_t> outers;
        for (std::size_t kout = 0; kout < v.pieces.size(); ++kout)
            if (!secular || std::abs(v.pieces[kout].freq + freq_in) <= kFreqMatchTol)
                outers.push_back(kout);
        if (outers.empty()) continue;
        any_pair = true;

        // The resolvent is applied as a rank-revealing least-squares solve: the
        // shifted bath generator may be singular as a matrix (lossless detuned
        // baths) while remaining invertible on the image of Q C_{k'} P; the
        // residual check detects genuine failures.
        const Matrix shifted =
            bath_generator.mat - Complex(0.0, freq_in) * Matrix::Identity(db * db, db * db);
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
        cod.setThreshold(1e-12); // rank cutoff, applied before factorizing
        cod.compute(shifted);

        for (int m = 0; m < ds; ++m)
            for (int n = 0; n < ds; ++n) {
                Matrix unit = Matrix::Zero(ds, ds);
                unit(m, n) = 1.0;
                Matrix x = kron(unit, bath_state.mat);

                // C_{k'} then Q
                Matrix y = minus_i * (full_ops[kin] * x - x * full_ops[kin]);
                y -= kron(partial_trace(y, v.space, 0), bath_state.mat);

                // -(L_B - i w')^{-1} on the bath factor of each system block
                for (int s = 0; s < ds; ++s)
                    for (int sp = 0; sp < ds; ++sp) {
                        Matrix block(db, db);
                        for (int b = 0; b < db; ++b)
                            for (int bp = 0; bp < db; ++bp)
                                block(b, bp) = y(s * db + b, sp * db + bp);
                        Vector rhs = -vectorize(block);
                        const double rhs_norm = rhs.cwiseAbs().maxCoeff();
                        if (rhs_norm == 0.0) continue;
                        Vector solved = cod.solve(rhs);
                        const double residual = (shifted * solved - rhs).cwiseAbs().maxCoeff();
                        if (residual > 1e-8 * rhs_norm)
                            throw NumericalError(
                                "non-invertible bath resolvent: Markov/RWA limit undefined");
                        Matrix solved_block = devectorize(solved, db);
                        for (int b = 0; b < db; ++b)
                            for (int bp = 0; bp < db; ++bp)
                                y(s * db + b, sp * db + bp) = solved_block(b, bp);
                    }

                // C_k then Tr_B; accumulate the column for matrix unit (m, n)
                for (std::size_t kout : outers) {
                    Matrix z = minus_i * (full_ops[kout] * y - y * full_ops[kout]);
                    out.generator.mat.col(m + n * ds) += vectorize(partial_trace(z, v.space, 0));
                }
            }
    }

    if (!any_pair && !v.pieces.empty())
        out.warnings.push_back("secular filter removed all interaction pairs; generator is zero");

    if (reference_freq) {
        const SidebandRates rates = extract_sideband_rates(out.generator);
        out.rates["gamma_h"] = rates.gamma_h;
        out.rates["gamma_c"] = rates.gamma_c;
        out.rates["delta_m"] = rates.delta_m;
    }
    return out;
}

bool LambdaParams::in_adiabatic_regime() const {
    const double scale = std::max({std::abs(delta), std::abs(omega_a), std::abs(omega_b)});
    return std::abs(bigdelta) >= 10.0 * scale;
}

Matrix lambda_effective_hamiltonian(const LambdaParams& p) {
    if (p.bigdelta == 0.0) throw ValidationError("lambda_effective_hamiltonian: bigdelta must be nonzero");
    Matrix h(2, 2);
    const double d4 = 4.0 * p.bigdelta;
    h(0, 0) = -p.delta / 2.0 - std::norm(p.omega_a) / d4;
    h(1, 1) = p.delta / 2.0 - std::norm(p.omega_b) / d4;
    // <a|H'|b> = <a|V|e><e|V|b> / (-Delta) with <e|V|j> = Omega_j / 2
    h(0, 1) = -std::conj(p.omega_a) * p.omega_b / d4;
    h(1, 0) = std::conj(h(0, 1));
    return h;
}

void OptomechParams::validate() const {
    if (!(omega_m > 0.0)) throw ValidationError("OptomechParams: omega_m must be positive");
    if (!(kappa > 0.0)) throw ValidationError("OptomechParams: kappa must be positive");
    if (gamma_m < 0.0) throw ValidationError("OptomechParams: gamma_m must be nonnegative");
    if (nbar < 0.0) throw ValidationError("OptomechParams: nbar must be nonnegative");
    if (n_cav < 2 || n_mech < 2) throw ValidationError("OptomechParams: Fock cutoffs must be >= 2");
}

Complex sideband_spectral(double delta, double kappa, double omega, int lam) {
    if (!(kappa > 0.0)) throw ValidationError("sideband_spectral: kappa must be positive");
    if (lam != 1 && lam != -1) throw ValidationError("sideband_spectral: lambda must be +1 or -1");
    return 1.0 / (Complex(0.0, delta + lam * omega) + kappa / 2.0);
}

SidebandRates sideband_rates(const OptomechParams& p) {
    if (!(p.kappa > 0.0)) throw ValidationError("sideband_rates: kappa must be positive");
    const double g2 = std::norm(p.g);
    const double half_kappa_sq = (p.kappa / 2.0) * (p.kappa / 2.0);
    SidebandRates rates;
    rates.gamma_h = g2 * p.kappa / ((p.delta + p.omega_m) * (p.delta + p.omega_m) + half_kappa_sq);
    rates.gamma_c = g2 * p.kappa / ((p.delta - p.omega_m) * (p.delta - p.omega_m) + half_kappa_sq);
    rates.delta_m = g2 * (sideband_spectral(p.delta, p.kappa, p.omega_m, +1) +
                          sideband_spectral(p.delta, p.kappa, p.omega_m, -1))
                             .imag();
    return rates;
}

ReducedGenerator sideband_generator(const OptomechParams& p) {
    p.validate();
    const SidebandRates rates = sideband_rates(p);
    const Matrix b = fock_annihilation(p.n_mech);
    const Matrix num = b.adjoint() * b;

    ReducedGenerator out;
    out.method = ReductionMethod::sideband;
    out.generator = commutator_superop(rates.delta_m * num) +
                    dissipator_superop(b.adjoint(), p.gamma_m * p.nbar + rates.gamma_h) +
                    dissipator_superop(b, p.gamma_m * (p.nbar + 1.0) + rates.gamma_c);
    out.rates["gamma_h"] = rates.gamma_h;
    out.rates["gamma_c"] = rates.gamma_c;
    out.rates["delta_m"] = rates.delta_m;
    return out;
}

double steady_occupation(const OptomechParams& p) {
    const SidebandRates rates = sideband_rates(p);
    const double denominator = p.gamma_m + rates.gamma_c - rates.gamma_h;
    if (!(denominator > 0.0))
        throw ValidationError("steady_occupation: reduced model unstable (nonpositive denominator)");
    return (p.gamma_m * p.nbar + rates.gamma_h) / denominator;
}

double cooperativity(const OptomechParams& p) {
    if (!(p.gamma_m > 0.0)) throw ValidationError("cooperativity: gamma_m must be positive");
    return 4.0 * std::norm(p.g) / (p.kappa * p.gamma_m);
}

} // namespace oqs
