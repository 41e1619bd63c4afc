#include "ahmass/massaspect.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace ahmass;
using ahmass::testing::rand_poly;
using ahmass::testing::rand_q;

namespace {

SphereTensor rand_aspect(int n, int k, int deg) {
    SphereTensor m = make_sphere_tensor(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.m(i, j) = m.m(j, i) = rand_poly(n, deg);
    return transversalize(m);
}

TangentField rand_tangent(int n, int deg) {
    TangentField V(n, QPoly(n));
    for (auto& v : V) v = rand_poly(n, deg);
    // project to the tangent space
    QPoly xv(n);
    for (int a = 0; a < n; ++a) xv += V[a] * sx(n, a);
    for (int a = 0; a < n; ++a) V[a] -= xv * sx(n, a);
    return V;
}

bool field_equal_on_sphere(const TangentField& a, const TangentField& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!vanishes_on_sphere(a[i] - b[i])) return false;
    return true;
}

double max_abs_diff(const DMat& a, const DMat& b) {
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[i][j] - b[i][j]));
    return e;
}

}  // namespace

TEST(Transversalize, Examples) {
    for (int n = 3; n <= 4; ++n)
        for (int k = 1; k <= 4; ++k) {
            SphereTensor d = make_sphere_tensor(n, k);
            for (int i = 0; i < n; ++i) d.m(i, i) = QPoly::constant(n, 1);
            auto t = transversalize(d);
            EXPECT_TRUE(equal_on_sphere(t.m, round_metric(n) * make_q(k + 1, k)));
            EXPECT_TRUE(is_transverse(t.m));
            // dx^1 (x) dx^1
            SphereTensor e = make_sphere_tensor(n, k);
            e.m(0, 0) = QPoly::constant(n, 1);
            auto te = transversalize(e);
            EXPECT_TRUE(is_transverse(te.m));
            QTensor want(n, 2, n);
            QPoly x1 = sx(n, 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    QPoly w(n);
                    if (i == 0 && j == 0) w += QPoly::constant(n, 1);
                    if (j == 0) w -= x1 * sx(n, i);
                    if (i == 0) w -= x1 * sx(n, j);
                    QPoly t2 = sx(n, i) * sx(n, j) * Q(k - 1);
                    if (i == j) t2 += QPoly::constant(n, 1);
                    w += x1 * x1 * t2 * make_q(1, k);
                    want(i, j) = w;
                }
            EXPECT_EQ(te.m, want);
        }
    EXPECT_THROW(transversalize(make_sphere_tensor(3, 0)), std::invalid_argument);
}

TEST(Transversalize, LinearAndIdempotentOnSphere) {
    for (int t = 0; t < 5; ++t) {
        const int n = 3 + t % 2, k = 2 + t;
        SphereTensor a = make_sphere_tensor(n, k), b = make_sphere_tensor(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                a.m(i, j) = a.m(j, i) = rand_poly(n, 2);
                b.m(i, j) = b.m(j, i) = rand_poly(n, 2);
            }
        Q c = rand_q();
        SphereTensor ab = a;
        ab.m = a.m + b.m * c;
        auto ta = transversalize(a), tb = transversalize(b);
        EXPECT_EQ(transversalize(ab).m, ta.m + tb.m * c);
        EXPECT_TRUE(equal_on_sphere(transversalize(ta).m, ta.m));
    }
}

TEST(SphereCalculus, MetricityAndScalars) {
    const int n = 3;
    for (int i = 0; i < n; ++i) {
        auto X = boost_field(n, i);
        EXPECT_TRUE(is_tangent(X));
        EXPECT_TRUE(equal_on_sphere(sphere_covariant_derivative(round_metric(n), X), QTensor(n, 2, n)));
        for (int j = 0; j < n; ++j) {
            QPoly want = -(sx(n, i) * sx(n, j));
            if (i == j) want += QPoly::constant(n, 1);
            EXPECT_TRUE(vanishes_on_sphere(sphere_covariant_derivative(sx(n, j), X) - want));
        }
    }
    TangentField radial(n, QPoly(n));
    for (int a = 0; a < n; ++a) radial[a] = sx(n, a);
    EXPECT_THROW(sphere_covariant_derivative(sx(n, 0), radial), std::invalid_argument);
}

TEST(SphereCalculus, CurvatureCommutator) {
    for (int n = 3; n <= 4; ++n)
        for (int t = 0; t < 3; ++t) {
            TangentField V = rand_tangent(n, 2);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    auto Ai = boost_field(n, i), Aj = boost_field(n, j);
                    auto lhs = sphere_covariant_derivative(sphere_covariant_derivative(V, Aj), Ai);
                    auto rhs = sphere_covariant_derivative(sphere_covariant_derivative(V, Ai), Aj);
                    auto br = sphere_covariant_derivative(V, lie_bracket(Ai, Aj));
                    TangentField curv(n, QPoly(n)), want(n, QPoly(n));
                    for (int a = 0; a < n; ++a) {
                        curv[a] = lhs[a] - rhs[a] - br[a];
                        // -r_ij(V) = -(V^i a_j - V^j a_i)
                        want[a] = -(V[i] * Aj[a] - V[j] * Ai[a]);
                    }
                    EXPECT_TRUE(field_equal_on_sphere(curv, want));
                }
        }
}

TEST(Actions, RoundMetricAndTrace) {
    for (int n = 3; n <= 4; ++n)
        for (int k = 1; k <= 4; ++k) {
            SphereTensor s{n, k, round_metric(n)};
            for (int i = 0; i < n; ++i) {
                auto a = boost_action(i, s);
                EXPECT_TRUE(equal_on_sphere(a.m, s.m.map([&](const QPoly& p) { return p * sx(n, i); }) * Q(k)));
                for (int j = i + 1; j < n; ++j) EXPECT_TRUE(equal_on_sphere(rotation_action(i, j, s).m, QTensor(n, 2, n)));
            }
            auto m = rand_aspect(n, k, 2);
            QPoly tr = sphere_trace(m.m);
            for (int i = 0; i < n; ++i) {
                QPoly lhs = sphere_trace(boost_action(i, m).m);
                QPoly rhs = -directional(boost_field(n, i), tr) + tr * sx(n, i) * Q(k);
                EXPECT_TRUE(vanishes_on_sphere(lhs - rhs));
            }
        }
    SphereTensor bad = make_sphere_tensor(3, 2);
    bad.m(0, 0) = QPoly::constant(3, 1);
    EXPECT_THROW(boost_action(0, bad), std::invalid_argument);
    EXPECT_THROW(rotation_action(0, 1, bad), std::invalid_argument);
}

TEST(Actions, PreserveTransversalityAndLinearity) {
    for (int n = 3; n <= 4; ++n) {
        auto m = rand_aspect(n, 3, 2), m2 = rand_aspect(n, 3, 2);
        Q c = rand_q();
        SphereTensor comb = m;
        comb.m = m.m + m2.m * c;
        for (int i = 0; i < n; ++i) {
            EXPECT_TRUE(is_transverse(boost_action(i, m).m));
            EXPECT_EQ(boost_action(i, comb).m, boost_action(i, m).m + boost_action(i, m2).m * c);
            for (int j = i + 1; j < n; ++j) EXPECT_TRUE(is_transverse(rotation_action(i, j, m).m));
        }
    }
}

TEST(Actions, BracketRelations) {
    for (int n = 3; n <= 4; ++n)
        for (int k : {2, n - 1}) {
            auto m = rand_aspect(n, k, 1);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    // r_ij . m = -[a_i, a_j] . m
                    QTensor comm = boost_action(i, boost_action(j, m)).m - boost_action(j, boost_action(i, m)).m;
                    EXPECT_TRUE(equal_on_sphere(rotation_action(i, j, m).m, comm * Q(-1)));
                    // the action is a Lie algebra homomorphism on [r_ij, a_i]
                    auto br = bracket(rotation_generator(n, i + 1, j + 1), boost_generator(n, i + 1)).m;
                    QTensor lhs = rotation_action(i, j, boost_action(i, m)).m - boost_action(i, rotation_action(i, j, m)).m;
                    EXPECT_TRUE(equal_on_sphere(lhs, algebra_action(br, m).m));
                }
        }
}

TEST(Actions, RotationRegression) {
    // r_23 on the transversalized dx^2 (x) dx^2, n = 3, k = 2 (0-based planes 1,2)
    SphereTensor e = make_sphere_tensor(3, 2);
    e.m(1, 1) = QPoly::constant(3, 1);
    auto t = transversalize(e);
    auto r = rotation_action(1, 2, t);
    EXPECT_TRUE(is_transverse(r.m));
    // at e_1 the rotation field vanishes and only -(m(r.,.) + m(.,r.)) survives:
    // m(rU, V) + m(U, rV) = -(U^2 V^3 + U^3 V^2)
    std::vector<double> e1{1, 0, 0};
    DMat v = sample_tensor(r.m, e1);
    EXPECT_NEAR(v[1][1], 0, 1e-15);
    EXPECT_NEAR(v[1][2], 1, 1e-15);
    EXPECT_NEAR(v[2][1], 1, 1e-15);
    EXPECT_NEAR(v[2][2], 0, 1e-15);
}

TEST(Actions, ConformalDensityWeight) {
    for (int n = 3; n <= 4; ++n)
        for (int k : {1, n - 1, n + 1}) {
            auto m = rand_aspect(n, k, 2);
            for (int i = 0; i < n; ++i) {
                Q integral = sphere_integral(sphere_trace(boost_action(i, m).m));
                // d/ds of int tr m over the boosted family: (k - n + 1) int x^i tr m
                EXPECT_EQ(integral, Q(k - n + 1) * sphere_integral(sphere_trace(m.m) * sx(n, i)));
                if (k == n - 1) {
                    EXPECT_EQ(integral, 0);
                }
            }
        }
}

TEST(Quadrature, IntegratesPolynomialsExactlyEnough) {
    for (int n = 2; n <= 5; ++n) {
        auto q = default_sphere_quadrature(n);
        for (int t = 0; t < 4; ++t) {
            QPoly p = rand_poly(n, 6);
            CompiledPoly cp(p);
            double s = 0;
            for (std::size_t a = 0; a < q.nodes.size(); ++a) s += q.weights[a] * cp(q.nodes[a]);
            EXPECT_NEAR(cp(q.nodes[0]), eval_double(p, q.nodes[0]), 1e-12);
            EXPECT_NEAR(s, sphere_integral(p).get_d(), 1e-12) << n;
        }
        for (auto& x : q.nodes) {
            double r2 = 0;
            for (double v : x) r2 += v * v;
            ASSERT_NEAR(r2, 1, 1e-14);
        }
    }
    EXPECT_NEAR(sphere_volume(3), 4 * M_PI, 1e-14);
}

TEST(GroupActionNumeric, IdentityAndTransversality) {
    const int n = 3;
    auto m = rand_aspect(n, 3, 2);
    auto q = sphere_quadrature(n, 8, 16);
    auto id = group_action_numeric(identity_element(n), m, q.nodes);
    for (std::size_t a = 0; a < q.nodes.size(); ++a) EXPECT_LT(max_abs_diff(id[a], sample_tensor(m.m, q.nodes[a])), 1e-13);
    auto A = compose(rational_boost(n, 1, Q(5, 3), Q(4, 3)), rational_rotation(n, 2, 3, Q(3, 5), Q(4, 5)));
    auto out = group_action_numeric(A, m, q.nodes);
    for (std::size_t a = 0; a < q.nodes.size(); ++a)
        for (int i = 0; i < n; ++i) {
            double c = 0;
            for (int j = 0; j < n; ++j) c += out[a][i][j] * q.nodes[a][j];
            EXPECT_LT(std::abs(c), 1e-12);
        }
}

TEST(GroupActionNumeric, DerivativeMatchesAlgebraAction) {
    for (int n = 3; n <= 4; ++n) {
        auto m = rand_aspect(n, 3, 2);
        auto q = sphere_quadrature(n, 4, 6);
        for (int i = 1; i <= n; ++i) {
            QTensor exact = boost_action(i - 1, m).m;
            auto D = [&](double h, const std::vector<double>& x) {
                DMat p = group_action_at(boost_matrix(n, i, h), m, x), mm = group_action_at(boost_matrix(n, i, -h), m, x);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) p[a][b] = (p[a][b] - mm[a][b]) / (2 * h);
                return p;
            };
            for (auto& x : q.nodes) {
                DMat d1 = D(2e-3, x), d2 = D(1e-3, x);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) d1[a][b] = (4 * d2[a][b] - d1[a][b]) / 3;
                EXPECT_LT(max_abs_diff(d1, sample_tensor(exact, x)), 1e-8);
            }
        }
    }
}
