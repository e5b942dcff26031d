// models.cpp — Model builders for the worked examples and test models

#include "oqs/models.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "oqs/dynamics.hpp"

namespace oqs {

Matrix fock_annihilation(int n) {
    if (n < 2) throw ValidationError("fock_annihilation: cutoff must be >= 2");
    Matrix a = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

DensityMatrix thermal_state(int n, double nbar) {
    if (n < 2) throw ValidationError("thermal_state: cutoff must be >= 2");
    if (nbar < 0.0) throw ValidationError("thermal_state: nbar must be nonnegative");
    const double ratio = nbar / (nbar + 1.0);
    Eigen::VectorXd weights(n);
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
        weights(k) = w;
        w *= ratio;
    }
    weights /= weights.sum();
    Matrix rho = Matrix::Zero(n, n);
    rho.diagonal() = weights.cast<Complex>();
    return DensityMatrix{std::move(rho)};
}

LambdaModel build_lambda(const LambdaParams& p) {
    if (p.bigdelta == 0.0) throw ValidationError("build_lambda: bigdelta must be nonzero");

    LambdaModel model;
    model.space = TensorSpace(3, 2);

    // Physical rotating-frame Hamiltonian, basis |a>, |b>, |e>.
    model.h_full = Matrix::Zero(3, 3);
    model.h_full(0, 0) = -p.delta / 2.0;
    model.h_full(1, 1) = p.delta / 2.0;
    model.h_full(2, 2) = p.bigdelta;
    model.h_full(2, 0) = p.omega_a / 2.0;
    model.h_full(0, 2) = std::conj(p.omega_a) / 2.0;
    model.h_full(2, 1) = p.omega_b / 2.0;
    model.h_full(1, 2) = std::conj(p.omega_b) / 2.0;

    model.h_s = Matrix::Zero(2, 2);
    model.h_s(0, 0) = -p.delta / 2.0;
    model.h_s(1, 1) = p.delta / 2.0;

    // Product-space factors: ground manifold {|a>, |b>, |vac>} and excited-like
    // factor {|0_e>, |e>}.
    Matrix s_op = Matrix::Zero(3, 3);
    s_op(2, 0) = p.omega_a / 2.0;
    s_op(2, 1) = p.omega_b / 2.0;
    Matrix e_raise = Matrix::Zero(2, 2);
    e_raise(1, 0) = 1.0;

    model.interaction.space = model.space;
    model.interaction.pieces.push_back({s_op, e_raise, 0.0});
    model.interaction.pieces.push_back({s_op.adjoint(), e_raise.adjoint(), 0.0});

    Matrix rho_b = Matrix::Zero(2, 2);
    rho_b(0, 0) = 1.0;
    model.bath_state = DensityMatrix{rho_b};

    Matrix h_bath = Matrix::Zero(2, 2);
    h_bath(1, 1) = p.bigdelta;
    model.bath_generator = commutator_superop(h_bath);

    Matrix h_s3 = Matrix::Zero(3, 3);
    h_s3(0, 0) = -p.delta / 2.0;
    h_s3(1, 1) = p.delta / 2.0;

    const Matrix eye2 = Matrix::Identity(2, 2);
    const Matrix eye3 = Matrix::Identity(3, 3);
    Matrix v = kron(s_op, e_raise);
    v += v.adjoint().eval();

    model.enlarged.hilbert_dim = 6;
    model.enlarged.static_parts.push_back({commutator_superop(kron(h_s3, eye2)), Part::system});
    model.enlarged.static_parts.push_back({commutator_superop(kron(eye3, h_bath)), Part::bath});
    model.enlarged.static_parts.push_back({commutator_superop(v), Part::interaction});

    if (!p.in_adiabatic_regime()) {
        std::ostringstream os;
        os << "lambda parameters outside the adiabatic regime: |bigdelta|=" << std::abs(p.bigdelta)
           << " < 10 max(|delta|, |omega_a|, |omega_b|)";
        model.warnings.push_back(os.str());
    }
    return model;
}

OptomechModel build_optomech(const OptomechParams& p) {
    p.validate();

    OptomechModel model;
    model.space = TensorSpace(p.n_mech, p.n_cav);
    const int d = model.space.total_dim();

    const Matrix b_local = fock_annihilation(p.n_mech);
    const Matrix a_local = fock_annihilation(p.n_cav);
    const Matrix eye_m = Matrix::Identity(p.n_mech, p.n_mech);
    const Matrix eye_c = Matrix::Identity(p.n_cav, p.n_cav);

    const Matrix b = kron(b_local, eye_c);
    const Matrix a = kron(eye_m, a_local);
    const Matrix num_mech = b.adjoint() * b;
    const Matrix num_cav = a.adjoint() * a;

    model.ops["a"] = a;
    model.ops["b"] = b;
    model.ops["num_mech"] = num_mech;
    model.ops["num_cav"] = num_cav;

    // q_a = g a + g* a^dag couples to the mechanical quadrature.
    const Matrix q_a_local = p.g * a_local + std::conj(p.g) * a_local.adjoint();
    const Matrix q_a = kron(eye_m, q_a_local);

    SuperOperator ls_mech = commutator_superop(p.omega_m * num_mech) +
                            dissipator_superop(b.adjoint(), p.gamma_m * p.nbar) +
                            dissipator_superop(b, p.gamma_m * (p.nbar + 1.0));
    SuperOperator ls_mech_dissipative = dissipator_superop(b.adjoint(), p.gamma_m * p.nbar) +
                                        dissipator_superop(b, p.gamma_m * (p.nbar + 1.0));
    SuperOperator lb = commutator_superop(p.delta * num_cav) + dissipator_superop(a, p.kappa);
    SuperOperator lint_static = commutator_superop(q_a * (b + b.adjoint()));

    model.spec_schrodinger.hilbert_dim = d;
    model.spec_schrodinger.static_parts.push_back({ls_mech, Part::system});
    model.spec_schrodinger.static_parts.push_back({lb, Part::bath});
    model.spec_schrodinger.static_parts.push_back({lint_static, Part::interaction});

    // Interaction picture with respect to the free mechanical Hamiltonian
    // only; the cavity detuning stays static in the bath sector.
    model.spec_interaction.hilbert_dim = d;
    model.spec_interaction.static_parts.push_back({ls_mech_dissipative, Part::system});
    model.spec_interaction.static_parts.push_back({lb, Part::bath});
    model.spec_interaction.pieces.push_back(
        {commutator_piece(q_a * b), -p.omega_m, Part::interaction});
    model.spec_interaction.pieces.push_back(
        {commutator_piece(q_a * b.adjoint()), +p.omega_m, Part::interaction});

    model.interaction.space = model.space;
    model.interaction.pieces.push_back({b_local, q_a_local, -p.omega_m});
    model.interaction.pieces.push_back({b_local.adjoint(), q_a_local, +p.omega_m});

    Matrix vac = Matrix::Zero(p.n_cav, p.n_cav);
    vac(0, 0) = 1.0;
    model.bath_state = DensityMatrix{vac};
    model.bath_generator =
        commutator_superop(p.delta * a_local.adjoint() * a_local) + dissipator_superop(a_local, p.kappa);

    // Truncation is the dominant silent error; warn when the predicted steady
    // occupation plus five Poisson sigmas crowds the cutoff.
    try {
        const double predicted = steady_occupation(p);
        if (predicted + 5.0 * std::sqrt(std::max(predicted, 0.0)) > p.n_mech / 2.0) {
            std::ostringstream os;
            os << "mechanical cutoff n_mech=" << p.n_mech
               << " may be too small for predicted steady occupation " << predicted;
            model.warnings.push_back(os.str());
        }
    } catch (const ValidationError&) {
        model.warnings.push_back("reduced model unstable; cutoff adequacy not assessed");
    }
    return model;
}

namespace {

double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

Matrix random_hermitian(std::mt19937_64& rng, int dim, double spectral_norm) {
    Matrix m(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) m(i, j) = Complex(uniform_pm1(rng), uniform_pm1(rng));
    m = (m + m.adjoint()).eval() / 2.0;
    const double norm = hermitian_spectral_norm(m);
    if (norm > 0.0) m *= spectral_norm / norm;
    return m;
}

} // namespace

RandomBipartiteModel build_random_bipartite(std::uint64_t seed,
                                            const RandomBipartiteParams& params) {
    if (params.bath_rate <= 0.0)
        throw ValidationError("build_random_bipartite: bath_rate must be positive");

    std::mt19937_64 rng(seed);
    RandomBipartiteModel model;
    model.space = TensorSpace(2, 2);

    const Matrix h_s = random_hermitian(rng, 2, params.hs_norm);
    const Matrix h_b = random_hermitian(rng, 2, params.hb_norm);
    const Matrix v_raw = random_hermitian(rng, 4, params.v_norm);

    Matrix lower = Matrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    model.bath_generator = assemble_static(h_b, {{lower, params.bath_rate}});
    model.bath_state = steady_state(model.bath_generator);

    MeanFieldSplit split =
        mean_field_split(decompose_static_interaction(v_raw, model.space), model.bath_state);
    model.interaction = std::move(split.interaction);

    Matrix shift = Matrix::Zero(2, 2);
    for (const auto& piece : split.shift) shift += piece.op; // all pieces are static
    model.h_system = h_s + (shift + shift.adjoint()) / 2.0;

    const Matrix eye2 = Matrix::Identity(2, 2);
    Matrix v_prime = Matrix::Zero(4, 4);
    for (const auto& piece : model.interaction.pieces)
        v_prime += kron(piece.system_op, piece.bath_op);

    model.spec.hilbert_dim = 4;
    model.spec.static_parts.push_back(
        {commutator_superop(kron(model.h_system, eye2)), Part::system});
    model.spec.static_parts.push_back(
        {assemble_static(kron(eye2, h_b), {{kron(eye2, lower), params.bath_rate}}), Part::bath});
    model.spec.static_parts.push_back(
        {commutator_superop((v_prime + v_prime.adjoint()) / 2.0), Part::interaction});
    return model;
}

} // namespace oqs
