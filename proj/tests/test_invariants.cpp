#include "ahmass/invariants.hpp"
#include "aspect_support.hpp"

#include <gtest/gtest.h>

using namespace ahmass;
using ahmass::testing::pure_trace_aspect;
using ahmass::testing::rand_q;
using ahmass::testing::rand_transverse_aspect;

namespace {

SphereTensor trace_free_part(SphereTensor m) {
    QPoly t = sphere_trace(m.m) * make_q(1, m.n - 1);
    m.m -= round_metric(m.n).map([&](const QPoly& s) { return s * t; });
    return m;
}

QPoly X(int n, int mu) { return QPoly::var(n + 1, mu); }

// Weyl mass by direct pointwise contraction at quadrature nodes.
double weyl_mass_oracle(const SphereTensor& m, const QTensor& W) {
    const int n = m.n;
    auto q = sphere_quadrature(n, 8, 16);
    double total = 0;
    for (std::size_t a = 0; a < q.nodes.size(); ++a) {
        const auto& x = q.nodes[a];
        std::vector<double> e{1.0};
        e.insert(e.end(), x.begin(), x.end());
        DMat P(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) P[i][j] = (i == j) - x[i] * x[j];
        DMat C(n, std::vector<double>(n, 0.0));
        for (int A = 0; A < n; ++A)
            for (int B = 0; B < n; ++B)
                for (int mu = 0; mu <= n; ++mu)
                    for (int nu = 0; nu <= n; ++nu) C[A][B] += e[mu] * e[nu] * eval_double(W(mu, A + 1, nu, B + 1), e);
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double mij = eval_double(m.m(i, j), x);
                for (int A = 0; A < n; ++A)
                    for (int B = 0; B < n; ++B) s += mij * P[A][i] * P[B][j] * C[A][B];
            }
        total += q.weights[a] * s;
    }
    return total;
}

}  // namespace

TEST(ConformalMass, Examples) {
    const int n = 3;
    auto round = pure_trace_aspect(QPoly::constant(n, 1), 2);
    EXPECT_EQ(conformal_mass(round, QPoly::constant(n + 1, 1)), 2);
    auto round3 = pure_trace_aspect(QPoly::constant(n, 1), 3);
    EXPECT_EQ(conformal_mass(round3, X(n, 1)), 0);
    // tr m = x^1
    auto lin = pure_trace_aspect(sx(n, 0) * make_q(1, 2), 3);
    EXPECT_EQ(conformal_mass(lin, X(n, 1)), make_q(1, 3));
    EXPECT_THROW(conformal_mass(round, X(n, 1)), std::invalid_argument);
    EXPECT_THROW(conformal_mass(round3, X(n, 1) + X(n, 0) * X(n, 0)), std::invalid_argument);
}

TEST(ConformalMass, DependsOnlyOnTraceAndIsLinear) {
    for (int n = 3; n <= 4; ++n)
        for (int n1 = 0; n1 <= 2; ++n1) {
            auto H = build_Hp(n, n1);
            auto m = rand_transverse_aspect(n, n - 1 + n1, 2);
            auto m2 = rand_transverse_aspect(n, n - 1 + n1, 2);
            auto tf = trace_free_part(m);
            const Q c = rand_q();
            SphereTensor comb = m;
            comb.m = m.m + m2.m * c;
            for (auto& P : H.basis) {
                EXPECT_EQ(conformal_mass(tf, P), 0);
                EXPECT_EQ(conformal_mass(comb, P), conformal_mass(m, P) + c * conformal_mass(m2, P));
                // oracle: direct product integral
                EXPECT_EQ(conformal_mass(m, P), sphere_integral(dehomogenize_at_time_one(P) * sphere_trace(m.m)));
            }
        }
}

TEST(WangMass, Examples) {
    const int n = 3;
    auto round = pure_trace_aspect(QPoly::constant(n, 1), 3);
    EXPECT_EQ(wang_mass_vector(round), (std::vector<Q>{2, 0, 0, 0}));
    auto lin = pure_trace_aspect(sx(n, 0) * make_q(1, 2), 3);
    EXPECT_EQ(wang_mass_vector(lin), (std::vector<Q>{0, make_q(1, 3), 0, 0}));
    auto m = rand_transverse_aspect(n, 3, 2), m2 = rand_transverse_aspect(n, 3, 2);
    SphereTensor sum = m;
    sum.m = m.m + m2.m;
    auto a = wang_mass_vector(m), b = wang_mass_vector(m2), s = wang_mass_vector(sum);
    for (int i = 0; i <= n; ++i) EXPECT_EQ(s[i], a[i] + b[i]);
    // agrees with the conformal masses of X^i
    EXPECT_EQ(a[0], sphere_integral(sphere_trace(m.m)));
    for (int i = 1; i <= n; ++i) EXPECT_EQ(a[i], conformal_mass(m, X(n, i)));
    EXPECT_THROW(wang_mass_vector(pure_trace_aspect(QPoly::constant(n, 1), 2)), std::invalid_argument);
}

TEST(WeylMass, PureTraceZeroAndOracle) {
    const int n = 4;
    auto W0 = build_Wp(n, 0);
    auto m = trace_free_part(rand_transverse_aspect(n, 5, 2));
    auto pt = pure_trace_aspect(ahmass::testing::rand_poly(n, 2), 5);
    bool some_nonzero = false;
    for (int i = 0; i < W0.dim(); ++i) {
        auto W = weyl_basis_tensor(W0, i);
        EXPECT_EQ(weyl_mass(pt, W), 0);
        Q v = weyl_mass(m, W);
        some_nonzero |= v != 0;
        if (i < 5) {
            EXPECT_NEAR(v.get_d(), weyl_mass_oracle(m, W), 1e-10);
        }
    }
    EXPECT_TRUE(some_nonzero);
    EXPECT_EQ(weyl_mass(m, QTensor(n + 1, 4, n + 1)), 0);
    EXPECT_THROW(weyl_mass(rand_transverse_aspect(n, 4, 1), weyl_basis_tensor(W0, 0)), std::invalid_argument);
    QTensor bad(n + 1, 4, n + 1);
    bad(0, 1, 0, 1) = QPoly::constant(n + 1, 1);
    EXPECT_THROW(weyl_mass(m, bad), std::invalid_argument);
}

TEST(WeylMass, OracleAtDegreeOne) {
    const int n = 4;
    auto W1 = build_Wp(n, 1);
    auto m = rand_transverse_aspect(n, 6, 1);
    for (int i = 0; i < W1.dim(); i += 17) {
        auto W = weyl_basis_tensor(W1, i);
        EXPECT_NEAR(weyl_mass(m, W).get_d(), weyl_mass_oracle(m, W), 1e-10);
    }
}

TEST(ChiralMass, ComplexStructure) {
    auto J = complex_structure_J();
    std::vector<Q> pole{-1, 0, 0};
    // tangent space at the pole is spanned by d_2, d_3
    Mat<Q> Jp(3, std::vector<Q>(3));
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i) Jp[l][i] = eval(J[l][i], pole);
    EXPECT_EQ(Jp[2][1], 1);
    EXPECT_EQ(Jp[1][2], -1);
    auto J2 = matmul(Jp, Jp);
    for (int a = 1; a < 3; ++a)
        for (int b = 1; b < 3; ++b) EXPECT_EQ(J2[a][b], a == b ? Q(-1) : Q(0));
    // J^2 = -sigma everywhere on the sphere
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i) {
            QPoly s(3);
            for (int a = 0; a < 3; ++a) s += J[l][a] * J[a][i];
            QPoly target = sx(3, l) * sx(3, i);
            if (l == i) target -= QPoly::constant(3, 1);
            EXPECT_TRUE(vanishes_on_sphere(s - target));
        }
    // the opposite orientation flips J
    auto Jm = complex_structure_J(-kVolumeSign);
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(vanishes_on_sphere(J[l][i] + Jm[l][i]));
}

TEST(ChiralMass, ConjugationAndTraceFreeness) {
    for (int n1 = 0; n1 <= 1; ++n1) {
        auto W = build_Wp(3, n1);
        auto m = rand_transverse_aspect(3, 4 + n1, 2);
        auto pt = pure_trace_aspect(ahmass::testing::rand_poly(3, 2), 4 + n1);
        bool nonzero = false;
        for (int i = 0; i < W.dim(); ++i) {
            CTensor w = weyl_basis_tensor(W, i).cast<CQ>();
            CQ p = weyl_mass_chiral(m, w, true), q = weyl_mass_chiral(m, w, false);
            EXPECT_EQ(q, conj(p));
            nonzero |= !is_zero(p.im);
            EXPECT_TRUE(is_zero(weyl_mass_chiral(pt, w, true)));
        }
        EXPECT_TRUE(nonzero);
    }
    EXPECT_THROW(weyl_mass_chiral(rand_transverse_aspect(4, 5, 1), weyl_basis_tensor(build_Wp(4, 0), 0).cast<CQ>(), true),
                 std::invalid_argument);
}

TEST(Equivariance, InfinitesimalConformal) {
    for (int n = 3; n <= 4; ++n)
        for (int n1 = 0; n1 <= 2; ++n1) {
            auto D = dual_space(MassFamily::conformal, n, n1);
            EquivarianceData E(D);
            auto m = rand_transverse_aspect(n, n - 1 + n1, 2);
            EXPECT_EQ(check_equivariance_infinitesimal(E, m), 0) << n << " " << n1;
            SphereTensor wrong = m;
            wrong.k += 1;
            EXPECT_GT(check_equivariance_infinitesimal(E, wrong, false), 0);
            EXPECT_THROW(check_equivariance_infinitesimal(E, wrong), std::invalid_argument);
            EXPECT_EQ(check_equivariance_infinitesimal(E, make_sphere_tensor(n, n - 1 + n1)), 0);
        }
}

TEST(Equivariance, InfinitesimalWeylAndChiral) {
    {
        auto D = dual_space(MassFamily::weyl, 4, 0);
        EquivarianceData E(D);
        EXPECT_EQ(check_equivariance_infinitesimal(E, rand_transverse_aspect(4, 5, 2)), 0);
        SphereTensor wrong = rand_transverse_aspect(4, 4, 2);
        EXPECT_GT(check_equivariance_infinitesimal(E, wrong, false), 0);
    }
    for (auto f : {MassFamily::weyl_plus, MassFamily::weyl_minus})
        for (int n1 = 0; n1 <= 1; ++n1) {
            auto D = dual_space(f, 3, n1);
            EquivarianceData E(D);
            EXPECT_EQ(check_equivariance_infinitesimal(E, rand_transverse_aspect(3, 4 + n1, 2)), 0);
        }
    EXPECT_THROW(dual_space(MassFamily::weyl_plus, 4, 0), std::invalid_argument);
    EXPECT_THROW(dual_space(MassFamily::weyl, 3, 0), std::invalid_argument);
}

TEST(Equivariance, FiniteBoosts) {
    const int n = 3;
    auto A1 = rational_boost(n, 1, make_q(5, 4), make_q(3, 4));
    for (int n1 = 0; n1 <= 2; ++n1) {
        auto D = dual_space(MassFamily::conformal, n, n1);
        auto m = rand_transverse_aspect(n, n - 1 + n1, 2);
        EXPECT_LT(check_equivariance_finite(D, m, identity_element(n), 16), 1e-12);
        const double r16 = check_equivariance_finite(D, m, A1, 16), r64 = check_equivariance_finite(D, m, A1, 64);
        EXPECT_LT(r64, 1e-9);
        if (n1 > 0) {
            EXPECT_LT(r64, r16);
        }
    }
    // k = n - 1: the total conformal mass is boost invariant
    auto D0 = dual_space(MassFamily::conformal, n, 0);
    auto m = rand_transverse_aspect(n, 2, 3);
    auto A2 = compose(rational_boost(n, 2, make_q(13, 12), make_q(5, 12)), A1);
    EXPECT_LT(check_equivariance_finite(D0, m, A2, 64), 1e-9);
}

TEST(MassValue, DualVectorMatchesDirectEvaluation) {
    auto D = dual_space(MassFamily::conformal, 3, 1);
    auto m = rand_transverse_aspect(3, 3, 2);
    auto v = mass_value(D, m);
    ASSERT_EQ(static_cast<int>(v.coefficients.size()), D.dim());
    EXPECT_EQ(v.k, 3);
    auto H = build_Hp(3, 1);
    for (int b = 0; b < D.dim(); ++b) EXPECT_EQ(v.coefficients[b], CQ(conformal_mass(m, H.basis[b])));
    EXPECT_THROW(mass_value(D, rand_transverse_aspect(3, 2, 1)), std::invalid_argument);
}

TEST(Intertwining, ClassifiedDensities) {
    for (int n = 3; n <= 4; ++n) {
        auto triv = trivial_density(n);
        auto r = intertwining_density_residual(triv, n - 1);
        EXPECT_EQ(r.boost, 0);
        EXPECT_EQ(r.rotation, 0);
        EXPECT_GT(intertwining_density_residual(triv, n).boost, 0);
        for (int n1 = 1; n1 <= 2; ++n1) {
            auto d = null_power_density(n, n1);
            auto s = intertwining_density_residual(d, n - 1 + n1);
            EXPECT_EQ(s.boost, 0);
            EXPECT_EQ(s.rotation, 0);
            EXPECT_GT(intertwining_density_residual(d, n + n1).boost, 0);
        }
    }
}
