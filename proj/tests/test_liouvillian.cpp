// test_liouvillian.cpp — Liouvillian assembly, projector algebra, structure
// identities

#include <algorithm>

#include "doctest.h"

#include "oqs/liouvillian.hpp"
#include "oqs/models.hpp"

#include "test_util.hpp"

using namespace oqs;

TEST_CASE("assemble_static") {
    SUBCASE("empty input gives the zero superoperator") {
        CHECK(max_abs(assemble_static(Matrix::Zero(2, 2), {}).mat) == 0.0);
    }
    SUBCASE("two-level decay spectrum is {0, -g/2, -g/2, -g}") {
        const double gamma = 0.8;
        Matrix lower = Matrix::Zero(2, 2);
        lower(0, 1) = 1.0;
        SuperOperator l = assemble_static(Matrix::Zero(2, 2), {{lower, gamma}});
        Eigen::ComplexEigenSolver<Matrix> es(l.mat);
        std::vector<double> re(4);
        for (int i = 0; i < 4; ++i) re[i] = es.eigenvalues()(i).real();
        std::sort(re.begin(), re.end());
        CHECK(std::abs(re[0] + gamma) < 1e-12);
        CHECK(std::abs(re[1] + gamma / 2) < 1e-12);
        CHECK(std::abs(re[2] + gamma / 2) < 1e-12);
        CHECK(std::abs(re[3]) < 1e-12);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-12);
    }
    SUBCASE("vec(I)^dag L = 0: trace preservation as a left null vector") {
        std::mt19937_64 rng(201);
        const Matrix h = test::random_hermitian(rng, 3);
        const Matrix jump = test::random_matrix(rng, 3, 3);
        SuperOperator l = assemble_static(h, {{jump, 0.7}});
        Vector trace_functional = vectorize(Matrix::Identity(3, 3));
        CHECK((trace_functional.adjoint() * l.mat).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("non-Hermitian Hamiltonian is rejected") {
        std::mt19937_64 rng(202);
        CHECK_THROWS_AS(assemble_static(test::random_matrix(rng, 2, 2), {}), ValidationError);
    }
}

TEST_CASE("evaluate_at") {
    std::mt19937_64 rng(203);
    LiouvillianSpec spec;
    spec.hilbert_dim = 2;
    const Matrix h = test::random_hermitian(rng, 2);
    spec.static_parts.push_back({commutator_superop(h), Part::system});

    SUBCASE("no pieces: static part at every time") {
        CHECK(max_abs(evaluate_at(spec, 0.0).mat - spec.static_part().mat) == 0.0);
        CHECK(max_abs(evaluate_at(spec, 17.3).mat - spec.static_part().mat) == 0.0);
    }

    const Matrix v = test::random_matrix(rng, 2, 2);
    const double freq = 2.4;
    spec.pieces.push_back({commutator_piece(v), freq, Part::interaction});
    spec.pieces.push_back({commutator_piece(v.adjoint()), -freq, Part::interaction});

    SUBCASE("t = 0 sums static part and all pieces") {
        Matrix expected = spec.static_part().mat;
        for (const auto& piece : spec.pieces) expected += piece.superop.mat;
        CHECK(max_abs(evaluate_at(spec, 0.0).mat - expected) < 1e-15);
    }
    SUBCASE("periodicity at 2 pi / freq") {
        const double period = 2.0 * std::numbers::pi / freq;
        CHECK(max_abs(evaluate_at(spec, 1.1 + period).mat - evaluate_at(spec, 1.1).mat) < 1e-12);
    }
    SUBCASE("Hermitian-paired pieces give a valid generator at random times") {
        for (int trial = 0; trial < 10; ++trial) {
            const double t = 10.0 * test::uniform_pm1(rng);
            CHECK(spec.generator_residual(t, test::random_hermitian(rng, 2)) < 1e-10);
        }
    }
}

TEST_CASE("build_projector") {
    std::mt19937_64 rng(204);

    SUBCASE("product states with the reference bath state are fixed points") {
        const TensorSpace space(2, 3);
        const DensityMatrix rho_b = test::random_density(rng, 3);
        ProjectorPair proj = build_projector(rho_b, space);
        const DensityMatrix rho_s = test::random_density(rng, 2);
        const Matrix product = kron(rho_s.mat, rho_b.mat);
        CHECK(max_abs(proj.p.apply(product) - product) < 1e-12);
    }

    SUBCASE("projector algebra across dimensions") {
        for (int ds : {2, 3, 4})
            for (int db : {2, 3, 4}) {
                // three random bath states per shape: 27 pairs in total
                for (int trial = 0; trial < 3; ++trial) {
                    const TensorSpace space(ds, db);
                    const DensityMatrix rho_b = test::random_density(rng, db);
                    ProjectorPair proj = build_projector(rho_b, space);
                    const int n = space.total_dim() * space.total_dim();
                    CHECK(max_abs(Matrix(proj.p.mat * proj.p.mat - proj.p.mat)) < 1e-12);
                    CHECK(max_abs(Matrix(proj.q.mat * proj.q.mat - proj.q.mat)) < 1e-12);
                    CHECK(max_abs(Matrix(proj.p.mat * proj.q.mat)) < 1e-12);
                    CHECK(max_abs(Matrix(proj.q.mat * proj.p.mat)) < 1e-12);
                    CHECK(max_abs(Matrix(proj.p.mat + proj.q.mat - Matrix::Identity(n, n))) <
                          1e-12);
                }
            }
    }

    SUBCASE("P preserves the trace") {
        const TensorSpace space(2, 2);
        const DensityMatrix rho_b = test::random_density(rng, 2);
        ProjectorPair proj = build_projector(rho_b, space);
        const Matrix x = test::random_matrix(rng, 4, 4);
        CHECK(std::abs(proj.p.apply(x).trace() - x.trace()) < 1e-12);
    }

    SUBCASE("invalid inputs are rejected") {
        const TensorSpace space(2, 3);
        CHECK_THROWS_AS(build_projector(test::random_density(rng, 2), space), ValidationError);
        DensityMatrix bad{Matrix::Identity(3, 3)}; // trace 3
        CHECK_THROWS_AS(build_projector(bad, space), ValidationError);
    }
}

TEST_CASE("check_structure on the worked models") {
    SUBCASE("lambda model residuals vanish") {
        LambdaParams p;
        p.omega_a = Complex(0.4, 0.1);
        p.omega_b = Complex(-0.2, 0.3);
        p.delta = 0.15;
        p.bigdelta = 20.0;
        LambdaModel model = build_lambda(p);
        ProjectorPair proj = build_projector(model.bath_state, model.space);
        StructureReport report = check_structure(model.enlarged, proj);
        CHECK(report.max_residual() < 1e-12);
    }
    SUBCASE("optomech model residuals vanish, including P L_Int P") {
        OptomechParams p;
        p.omega_m = 3.0;
        p.delta = 2.0;
        p.kappa = 0.7;
        p.gamma_m = 0.01;
        p.nbar = 0.3;
        p.g = Complex(0.05, 0.02);
        p.n_cav = 3;
        p.n_mech = 3;
        OptomechModel model = build_optomech(p);
        ProjectorPair proj = build_projector(model.bath_state, model.space);
        CHECK(check_structure(model.spec_schrodinger, proj).max_residual() < 1e-12);
        CHECK(check_structure(model.spec_interaction, proj).max_residual() < 1e-12);
    }
    SUBCASE("non-stationary bath state is reported, not thrown") {
        // thermal cavity state under pure decay is not stationary
        OptomechParams p;
        p.omega_m = 3.0;
        p.delta = 0.0;
        p.kappa = 0.7;
        p.gamma_m = 0.01;
        p.nbar = 0.0;
        p.g = 0.0;
        p.n_cav = 4;
        p.n_mech = 2;
        OptomechModel model = build_optomech(p);
        DensityMatrix thermal_cavity = thermal_state(p.n_cav, 0.5);
        ProjectorPair proj = build_projector(thermal_cavity, model.space);
        StructureReport report = check_structure(model.spec_schrodinger, proj);
        CHECK(report.bath_stationarity > 1e-3);
    }
    SUBCASE("mislabeled contributions are caught") {
        // an interaction labeled as system-only must break [L_S, P] = 0
        OptomechParams p;
        p.omega_m = 3.0;
        p.delta = 2.0;
        p.kappa = 0.7;
        p.gamma_m = 0.01;
        p.nbar = 0.3;
        p.g = Complex(0.2, 0.0);
        p.n_cav = 3;
        p.n_mech = 3;
        OptomechModel model = build_optomech(p);
        LiouvillianSpec broken = model.spec_schrodinger;
        for (auto& part : broken.static_parts)
            if (part.label == Part::interaction) part.label = Part::system;
        ProjectorPair proj = build_projector(model.bath_state, model.space);
        CHECK(check_structure(broken, proj).ls_p_commutator > 1e-6);
    }
    SUBCASE("time-dependent bath pieces are rejected") {
        LiouvillianSpec spec;
        spec.hilbert_dim = 4;
        spec.pieces.push_back({SuperOperator::zero(4), 1.0, Part::bath});
        std::mt19937_64 rng(205);
        ProjectorPair proj = build_projector(test::random_density(rng, 2), TensorSpace(2, 2));
        CHECK_THROWS_AS(check_structure(spec, proj), ValidationError);
    }
}

TEST_CASE("check_structure agrees with dense superoperator products") {
    // Deliberately mislabeled random contributions give nonzero residuals in
    // every slot; the block-wise evaluation must match the dense products.
    std::mt19937_64 rng(206);
    const TensorSpace space(2, 3);
    ProjectorPair proj = build_projector(test::random_density(rng, 3), space);

    LiouvillianSpec spec;
    spec.hilbert_dim = space.total_dim();
    const Matrix h1 = test::random_hermitian(rng, 6);
    const Matrix h2 = test::random_hermitian(rng, 6);
    const Matrix h3 = test::random_hermitian(rng, 6);
    spec.static_parts.push_back({commutator_superop(h1), Part::system});
    spec.static_parts.push_back({commutator_superop(h2), Part::bath});
    spec.static_parts.push_back({commutator_superop(h3), Part::interaction});

    StructureReport report = check_structure(spec, proj);
    const Matrix& p = proj.p.mat;
    const Matrix& s1 = spec.static_parts[0].superop.mat;
    const Matrix& s2 = spec.static_parts[1].superop.mat;
    const Matrix& s3 = spec.static_parts[2].superop.mat;

    CHECK(report.ls_p_commutator == doctest::Approx(max_abs(Matrix(s1 * p - p * s1))).epsilon(1e-12));
    CHECK(report.lb_p == doctest::Approx(max_abs(Matrix(s2 * p))).epsilon(1e-12));
    CHECK(report.p_lb == doctest::Approx(max_abs(Matrix(p * s2))).epsilon(1e-12));
    CHECK(report.p_lint_p == doctest::Approx(max_abs(Matrix(p * s3 * p))).epsilon(1e-12));
    CHECK(report.ls_p_commutator > 1e-3); // the controls are genuinely nonzero
    CHECK(report.lb_p > 1e-3);
    CHECK(report.p_lb > 1e-3);
    CHECK(report.p_lint_p > 1e-3);
}
