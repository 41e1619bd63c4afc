#include "ahmass/weylspace.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace ahmass;
using ahmass::testing::rand_homogeneous;
using ahmass::testing::rand_q;

namespace {

QPoly X(int nv, int i) { return QPoly::var(nv, i); }

std::vector<QPoly> rand_xi(int nv, int deg) {
    std::vector<QPoly> xi;
    for (int i = 0; i < nv; ++i) xi.push_back(rand_homogeneous(nv, deg));
    return xi;
}

PolyForm<Q> rand_form(int d, int k, int deg) {
    PolyForm<Q> w(d, k, d);
    for (auto& I : sorted_subsets(d, k)) w.add(I, rand_homogeneous(d, deg));
    return w;
}

QTensor rand_weyl(const WeylSpace& W) {
    std::map<int, Q> acc;
    for (auto& b : W.basis) {
        Q c = rand_q();
        for (auto& [u, x] : b) acc[u] += c * x;
    }
    for (auto it = acc.begin(); it != acc.end();) it = is_zero(it->second) ? acc.erase(it) : std::next(it);
    return weyl_tensor_of<Q>(W, to_sparse(acc));
}

// A de Donder solution: traceless, divergence-free symmetric tensor with
// harmonic coefficients, found as a random element of the solution space.
QTensor rand_de_donder(int n, int deg) {
    const int nv = n + 1;
    auto mons = monomials_of_degree(nv, deg);
    const int M = static_cast<int>(mons.size());
    std::vector<std::pair<int, int>> comps;
    for (int a = 0; a < nv; ++a)
        for (int b = a; b < nv; ++b) comps.push_back({a, b});
    const int C = static_cast<int>(comps.size());
    auto tensor_of = [&](const std::vector<Q>& x) {
        QTensor h(nv, 2, nv);
        for (int c = 0; c < C; ++c)
            for (int j = 0; j < M; ++j)
                if (x[c * M + j] != 0) {
                    h(comps[c].first, comps[c].second).add_term(mons[j], x[c * M + j]);
                    if (comps[c].first != comps[c].second) h(comps[c].second, comps[c].first).add_term(mons[j], x[c * M + j]);
                }
        return h;
    };
    std::map<std::pair<int, std::pair<int, Mono>>, std::map<int, Q>> rows;
    for (int u = 0; u < C * M; ++u) {
        std::vector<Q> e(C * M, Q(0));
        e[u] = 1;
        QTensor h = tensor_of(e);
        std::map<std::pair<int, Mono>, Q> out;
        flatten_into(box_tensor(h), out);
        for (auto& [k, c] : out) rows[{0, k}][u] += c;
        const QPoly tr = eta_trace(h);
        for (auto& [m, c] : tr.terms()) rows[{1, {0, m}}][u] += c;
        auto dv = eta_divergence(h);
        for (int nu = 0; nu < nv; ++nu)
            for (auto& [m, c] : dv[nu].terms()) rows[{2, {nu, m}}][u] += c;
    }
    std::vector<SparseVec<Q>> sr;
    for (auto& [k, r] : rows) sr.push_back(to_sparse(r));
    std::vector<Q> x(C * M, Q(0));
    for (auto& v : nullspace(sr, C * M)) {
        Q c = rand_q();
        for (auto& [u, a] : v) x[u] += c * a;
    }
    return tensor_of(x);
}

}  // namespace

TEST(LinearizedEinstein, PureGaugeAndDeDonder) {
    for (int n = 3; n <= 4; ++n) {
        const int nv = n + 1;
        for (int d = 1; d <= 3; ++d) {
            QTensor h = symmetric_gradient(rand_xi(nv, d));
            EXPECT_TRUE(linearized_einstein(h).is_zero());
            EXPECT_TRUE(linearized_riemann(h).is_zero());
        }
        QTensor dd = rand_de_donder(n, 2);
        EXPECT_FALSE(dd.is_zero());
        EXPECT_TRUE(linearized_einstein(dd).is_zero());
    }
}

TEST(LinearizedEinstein, MetricTimesSquareIsPinned) {
    // h = eta s, s = X.X: div h = 2 X_nu, tr h = (n+1) s, so E = 2n(n-1) eta
    const int n = 3, nv = n + 1;
    QPoly s = minkowski_square<Q>(nv);
    QTensor h(nv, 2, nv);
    for (int m = 0; m < nv; ++m) h(m, m) = s * Q(eta_diag(m));
    QTensor E = linearized_einstein(h);
    EXPECT_FALSE(E.is_zero());
    for (int m = 0; m < nv; ++m)
        for (int k = 0; k < nv; ++k) {
            Q want = m == k ? Q(eta_diag(m) * 2 * n * (n - 1)) : Q(0);
            EXPECT_EQ(E(m, k), QPoly::constant(nv, want));
        }
}

TEST(LinearizedRiemann, ConstantCoefficientsAndSymmetries) {
    const int nv = 5;
    QTensor c(nv, 2, nv);
    for (int a = 0; a < nv; ++a)
        for (int b = a; b < nv; ++b) c(a, b) = c(b, a) = QPoly::constant(nv, rand_q());
    EXPECT_TRUE(linearized_riemann(c).is_zero());
    QTensor h = rand_de_donder(4, 2);
    QTensor R = linearized_riemann(h);
    EXPECT_TRUE(satisfies_weyl_constraints(R));
}

TEST(LinearizedRiemann, HighestWeightComponent) {
    // R(H)(e_{-1}, e_{-2}, e_{-1}, e_{-2}) for H = H_{p w1 + 2 w2}, n = 4
    const int n = 4;
    for (int p = 0; p <= 2; ++p) {
        auto rep = hw_vectors_weyl(n, p);
        const CTensor& H = rep[2].printed.value();
        CTensor R = linearized_riemann(H);
        auto e1 = null_basis_vector(n, -1), e2 = null_basis_vector(n, -2);
        CPoly v(n + 1);
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b)
                for (int c = 0; c <= n; ++c)
                    for (int d = 0; d <= n; ++d) v += R(a, b, c, d) * (e1[a] * e2[b] * e1[c] * e2[d]);
        // proportional to (p+2)(p+3) (Z^{-1})^p; the factor -1/2 comes from the
        // normalization e_{-1} = (d_0 + d_1)/2 of the null basis
        CPoly want = zpow(n, -1, p) * CQ(make_q(-(p + 2) * (p + 3), 2));
        EXPECT_EQ(v, want) << "p=" << p;
    }
}

TEST(DeDonder, AlreadyGaugedIsUnchanged) {
    QTensor h = rand_de_donder(3, 2);
    auto g = de_donder_fix(h);
    EXPECT_EQ(g.h, h);
    for (auto& x : g.xi) EXPECT_TRUE(x.is_zero());
}

TEST(DeDonder, PureGaugeAndNonHarmonic) {
    for (int n = 3; n <= 4; ++n)
        for (int d = 2; d <= 3; ++d) {
            QTensor h = symmetric_gradient(rand_xi(n + 1, d));
            auto g = de_donder_fix(h);
            EXPECT_TRUE(is_de_donder(g.h));
            EXPECT_TRUE(box_tensor(g.h).is_zero());
            EXPECT_EQ(g.h, h + symmetric_gradient(g.xi));
            EXPECT_TRUE(linearized_riemann(g.h).is_zero());
            // a solution with curvature: de Donder solution plus gauge
            QTensor s = rand_de_donder(n, d) + symmetric_gradient(rand_xi(n + 1, d + 1));
            auto g2 = de_donder_fix(s);
            EXPECT_TRUE(is_de_donder(g2.h));
            EXPECT_EQ(linearized_riemann(g2.h), linearized_riemann(s));
        }
    QTensor bad(4, 2, 4);
    for (int m = 0; m < 4; ++m) bad(m, m) = minkowski_square<Q>(4) * Q(eta_diag(m));
    ASSERT_FALSE(linearized_einstein(bad).is_zero());
    EXPECT_THROW(de_donder_fix(bad), std::invalid_argument);
}

TEST(DeDonder, NullTracePattern) {
    const int n = 3, nv = n + 1;
    QPoly u = X(nv, 0) - X(nv, 1);
    for (int p = 0; p <= 2; ++p) {
        // xi = -(X^0 - X^1)^{p+3} (dX^0 + dX^1) / (2(p+3))
        std::vector<QPoly> xi(nv, QPoly(nv));
        xi[0] = xi[1] = pow(u, p + 3) * Q(-1, 2 * (p + 3));
        QTensor h = symmetric_gradient(xi) * Q(-1);
        EXPECT_EQ(eta_trace(h) * Q(-1, 2), pow(u, p + 2));
        // the explicit xi removes h entirely; its divergence is -tr(h)/2
        QPoly div(nv);
        for (int m = 0; m < nv; ++m) div += derivative(xi[m], m) * Q(eta_diag(m));
        EXPECT_EQ(div, pow(u, p + 2));
        for (auto& x : xi) EXPECT_TRUE(wave_operator(x).is_zero());
        auto g = de_donder_fix(h);
        EXPECT_TRUE(is_de_donder(g.h));
        EXPECT_TRUE(box_tensor(g.h).is_zero());
    }
}

TEST(Homotopy, Examples) {
    PolyForm<Q> w(4, 2, 4);
    w.add({1, 2}, QPoly::constant(4, 1));
    auto I = poincare_homotopy(w);
    PolyForm<Q> want(4, 1, 4);
    want.add({1}, X(4, 2) * Q(-1, 2));
    want.add({2}, X(4, 1) * Q(1, 2));
    EXPECT_EQ(I, want);
    EXPECT_EQ(exterior_derivative(I), w);
    // k = 1: I(df) = f for f(0) = 0
    QPoly f = X(4, 0) * X(4, 1) + X(4, 2) * X(4, 2) * X(4, 3) + X(4, 3);
    PolyForm<Q> f0(4, 0, 4);
    f0.add({}, f);
    auto If = poincare_homotopy(exterior_derivative(f0));
    EXPECT_EQ(If.at({}), f);
    EXPECT_THROW(poincare_homotopy(f0), std::invalid_argument);
}

TEST(Homotopy, IdentityOnRandomForms) {
    for (int k = 1; k <= 3; ++k)
        for (int deg = 0; deg <= 4; ++deg) {
            auto w = rand_form(4, k, deg);
            EXPECT_EQ(exterior_derivative(poincare_homotopy(w)) + poincare_homotopy(exterior_derivative(w)), w);
            auto c = exterior_derivative(rand_form(4, k - 1, deg + 1));
            EXPECT_EQ(exterior_derivative(poincare_homotopy(c)), c);
        }
}

TEST(BuildWp, Dimensions) {
    EXPECT_EQ(build_Wp(3, 0).dim(), 10);
    EXPECT_EQ(build_Wp(4, 0).dim(), 35);
    EXPECT_EQ(build_Wp(3, 1).dim(), 24);
    for (int n = 3; n <= 5; ++n)
        for (int p = 0; p <= (n == 3 ? 3 : 2); ++p) EXPECT_EQ(Q(build_Wp(n, p).dim()), dim_Wp_formula(n, p)) << n << " " << p;
    // classical count of algebraic Weyl tensors in dimension d = n+1
    for (int n = 3; n <= 6; ++n) {
        const int d = n + 1;
        EXPECT_EQ(build_Wp(n, 0).dim(), d * (d + 1) * (d + 2) * (d - 3) / 12);
    }
}

TEST(BuildWp, BasisSatisfiesConstraintsAndIsClosed) {
    for (auto [n, p] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {4, 1}}) {
        auto W = build_Wp(n, p);
        for (int i = 0; i < W.dim(); ++i) {
            QTensor T = weyl_basis_tensor(W, i);
            ASSERT_TRUE(satisfies_weyl_constraints(T));
            auto c = weyl_coordinates(W, T);
            ASSERT_TRUE(c.has_value());
            for (int j = 0; j < W.dim(); ++j) EXPECT_EQ((*c)[j], i == j ? 1 : 0);
        }
        for (auto& a : all_generators(n))
            for (int i = 0; i < W.dim(); i += 3) {
                QTensor aT = algebra_act_on_tensor(a.m, weyl_basis_tensor(W, i));
                EXPECT_TRUE(weyl_coordinates(W, aT).has_value());
            }
    }
    // a tensor violating the trace condition is rejected
    auto W = build_Wp(3, 0);
    QTensor bad(4, 4, 4);
    for (auto [a, b, c, d, s] : std::vector<std::array<int, 5>>{{0, 1, 0, 1, 1}, {1, 0, 1, 0, 1}, {0, 1, 1, 0, -1}, {1, 0, 0, 1, -1}})
        bad(a, b, c, d) = QPoly::constant(4, s);
    EXPECT_FALSE(satisfies_weyl_constraints(bad));
    EXPECT_FALSE(weyl_coordinates(W, bad).has_value());
}

TEST(WeylForm, CoordinateFormMatchesContractionAndIsInvariant) {
    for (auto [n, p] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {4, 0}, {4, 1}}) {
        auto W = build_Wp(n, p);
        std::vector<QTensor> T;
        for (int i = 0; i < W.dim(); ++i) T.push_back(weyl_basis_tensor(W, i));
        for (int i = 0; i < W.dim(); i += 2)
            for (int j = 0; j < W.dim(); j += 3) EXPECT_EQ(weyl_form(W, W.basis[i], W.basis[j]), weyl_form_tensor(T[i], T[j]));
        for (auto& a : all_generators(n))
            for (int i = 0; i < W.dim(); i += 4)
                for (int j = 1; j < W.dim(); j += 5) {
                    Q v = weyl_form_tensor(algebra_act_on_tensor(a.m, T[i]), T[j]) +
                          weyl_form_tensor(T[i], algebra_act_on_tensor(a.m, T[j]));
                    EXPECT_EQ(v, 0);
                }
    }
}

TEST(WeylForm, SignatureExamplesAndFormula) {
    EXPECT_EQ(signature_Wp(build_Wp(3, 0)), (Signature{5, 5, 0}));
    EXPECT_EQ(signature_Wp(build_Wp(4, 0)), (Signature{19, 16, 0}));
    for (int n = 3; n <= 5; ++n)
        for (int p = 0; p <= (n == 3 ? 3 : 2); ++p) {
            auto W = build_Wp(n, p);
            auto s = signature_Wp(W);
            EXPECT_EQ(s, signature_Wp_formula(n, p)) << n << " " << p;
            EXPECT_EQ(s.plus + s.minus, W.dim());
        }
    for (int n = 3; n <= 6; ++n) {
        auto s = signature_Wp_formula(n, 0);
        EXPECT_EQ(12 * (s.plus - s.minus), (n + 2) * (n - 1) * (n - 2) * (n - 3));
    }
}

TEST(WeylToPotential, ZeroAndRandomConstant) {
    QTensor zero(5, 4, 5);
    EXPECT_TRUE(weyl_to_potential(zero).is_zero());
    auto W = build_Wp(4, 0);
    QTensor T = rand_weyl(W);
    QTensor h = weyl_to_potential(T);
    for (int f = 0; f < static_cast<int>(h.size()); ++f) {
        if (!h[f].is_zero()) {
            EXPECT_EQ(h[f].degree(), 2);
        }
    }
    EXPECT_EQ(linearized_riemann(h), T * Q(-1, 2));
    EXPECT_TRUE(linearized_einstein(h).is_zero());
}

TEST(WeylToPotential, RoundTrips) {
    for (int p = 0; p <= 1; ++p) {
        auto W = build_Wp(4, p);
        for (int t = 0; t < 3; ++t) {
            QTensor T = rand_weyl(W);
            auto rep = weyl_to_potential_report(T);
            EXPECT_TRUE(rep.closed_omega && rep.closed_S && rep.closed_fmu && rep.closed_A);
            EXPECT_EQ(linearized_riemann(rep.h), T * Q(-1, 2));
        }
    }
    // R(pipeline(-2 R(h))) = R(h) for de Donder solutions
    for (int n = 3; n <= 4; ++n) {
        QTensor h = rand_de_donder(n, 3);
        QTensor R = linearized_riemann(h);
        EXPECT_EQ(linearized_riemann(weyl_to_potential(R * Q(-2))), R);
    }
    QTensor bad(4, 4, 4);
    bad(0, 1, 0, 1) = QPoly::constant(4, 1);
    EXPECT_THROW(weyl_to_potential(bad), std::invalid_argument);
}

TEST(HighestWeight, GeneralDimensionMatchesClosedForms) {
    for (int n = 4; n <= 5; ++n)
        for (int p = 0; p <= 2; ++p) {
            auto rep = hw_vectors_weyl(n, p);
            ASSERT_EQ(rep.size(), 3u);
            for (auto& r : rep) {
                ASSERT_EQ(r.constructed.size(), 1u) << r.label;
                EXPECT_TRUE(r.printed_matches) << r.label;
                EXPECT_TRUE(r.constraints.traceless && r.constraints.harmonic && r.constraints.divergence_free);
            }
            // the first two are pure gauge, the third carries the curvature
            EXPECT_FALSE(rep[0].riemann_nonzero);
            EXPECT_FALSE(rep[1].riemann_nonzero);
            EXPECT_TRUE(rep[2].riemann_nonzero);
            auto L = check_lie_derivative_identities(n, p);
            EXPECT_TRUE(L.first_holds);
            EXPECT_TRUE(L.second_holds);
            EXPECT_EQ(L.xi_first_weight[0], p + 4);
        }
}

TEST(HighestWeight, DimensionThreeChiralFamilies) {
    for (int p = 0; p <= 2; ++p) {
        auto rep = hw_vectors_weyl(3, p);
        ASSERT_EQ(rep.size(), 5u);
        for (int i = 0; i < 3; ++i) EXPECT_TRUE(rep[i].printed_matches) << rep[i].label;
        // the printed chiral vectors are not highest weight vectors
        EXPECT_FALSE(rep[3].printed_matches);
        EXPECT_FALSE(rep[4].printed_matches);
        ASSERT_EQ(rep[3].constructed.size(), 1u);
        ASSERT_EQ(rep[4].constructed.size(), 1u);
        EXPECT_TRUE(proportionality(chiral_hw_vector(p, false), rep[3].constructed[0]).has_value());
        EXPECT_TRUE(proportionality(chiral_hw_vector(p, true), rep[4].constructed[0]).has_value());
        EXPECT_TRUE(rep[3].riemann_nonzero && rep[4].riemann_nonzero);
        EXPECT_TRUE(rep[3].constraints.divergence_free && rep[3].constraints.traceless);
    }
}
