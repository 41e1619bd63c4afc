#pragma once
// Wave-harmonic homogeneous polynomials H_p on R^{n,1}, the Fischer-type
// decomposition P = H + (X^mu X_mu) Q, the invariant form q and its signature.

#include "ahmass/linalg.hpp"
#include "ahmass/lorentz.hpp"
#include "ahmass/poly.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace ahmass {

inline Q dim_Hp_formula(int n, int p) {
    // C(p+n-2, p) (2p+n-1)/(n-1)
    return binomial_q(p + n - 2, p) * Q(2 * p + n - 1) / Q(n - 1);
}

inline Signature signature_Hp_formula(int n, int p) {
    return {static_cast<int>(binomial_q(p + n - 1, n - 1).get_num().get_si()),
            p == 0 ? 0 : static_cast<int>(binomial_q(p + n - 2, n - 1).get_num().get_si()), 0};
}

template <class F = Q>
struct HarmonicSpace {
    int n = 0, p = 0;
    std::vector<Poly<F>> basis;
    int dim() const { return static_cast<int>(basis.size()); }
};

// Kernel of the wave operator on homogeneous degree-p polynomials in n+1 variables.
template <class F = Q>
HarmonicSpace<F> build_Hp(int n, int p) {
    if (n < 1 || p < 0) throw std::invalid_argument("build_Hp: bad (n, p)");
    const int nv = n + 1;
    auto cols = monomials_of_degree(nv, p);
    std::map<Mono, std::map<int, F>> rows;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        const Poly<F> w = wave_operator(Poly<F>::monomial(nv, cols[j]));
        for (auto& [m, c] : w.terms()) rows[m][j] += c;
    }
    std::vector<SparseVec<F>> sr;
    for (auto& [m, r] : rows) sr.push_back(to_sparse(r));
    HarmonicSpace<F> h{n, p, {}};
    for (auto& v : nullspace(sr, static_cast<int>(cols.size()))) {
        Poly<F> P(nv);
        for (auto& [j, c] : v) P.add_term(cols[j], c);
        h.basis.push_back(P);
    }
    return h;
}

// box(s^m H) = lambda s^{m-1} H for H harmonic of degree h, s = X^mu X_mu.
inline Q box_power_constant(int n, int m, int h) { return Q(2 * m * (n - 1 + 2 * m + 2 * h)); }

// Full decomposition P = sum_j s^j H_j with each H_j wave-harmonic.
template <class F>
std::vector<Poly<F>> fischer_components(const Poly<F>& P) {
    if (!P.is_homogeneous()) throw std::invalid_argument("harmonic_decompose: input not homogeneous");
    const int nv = P.nvars(), n = nv - 1;
    const int d = P.is_zero() ? 0 : P.degree();
    if (d < 2) return {P};
    // box P = sum_j s^j R_j, and box(s^{j+1} H'_j) = lambda s^j H'_j
    auto R = fischer_components(wave_operator(P));
    std::vector<Poly<F>> out(1 + R.size(), Poly<F>(nv));
    Poly<F> sQ(nv), s = minkowski_square<F>(nv), spow = s;
    for (std::size_t j = 0; j < R.size(); ++j) {
        const int h = d - 2 - 2 * static_cast<int>(j);
        out[j + 1] = R[j] * F(1 / box_power_constant(n, static_cast<int>(j) + 1, h));
        sQ += spow * out[j + 1];
        spow = spow * s;
    }
    out[0] = P - sQ;
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
}

template <class F>
struct HarmonicSplit {
    Poly<F> H, Q;
};

template <class F>
HarmonicSplit<F> harmonic_decompose(const Poly<F>& P) {
    auto c = fischer_components(P);
    const int nv = P.nvars();
    Poly<F> Qp(nv), s = minkowski_square<F>(nv), spow = Poly<F>::constant(nv, F(1));
    for (std::size_t j = 1; j < c.size(); ++j) {
        Qp += spow * c[j];
        spow = spow * s;
    }
    return {c[0], Qp};
}

// Apolar form q(P1, P2) = P1(eta d) P2: distinct monomials are orthogonal and
// q(X^a, X^a) = a! (-1)^{a_0}, so q(X^0) = -1 and q(X^i) = 1. The factorial
// weights are what make q invariant under the algebra action.
template <class F>
F invariant_form_q(const Poly<F>& a, const Poly<F>& b) {
    F s(0);
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& big = a.size() <= b.size() ? b : a;
    for (auto& [m, c] : small.terms()) {
        auto it = big.terms().find(m);
        if (it == big.terms().end()) continue;
        Q w = 1;
        for (int i = 0; i < kMaxVars; ++i) w *= factorial_q(m[i]);
        if (m[0] % 2) w = -w;
        s += F(w) * c * it->second;
    }
    return s;
}

template <class F>
Mat<Q> gram_matrix(const std::vector<Poly<F>>& basis) {
    const int d = static_cast<int>(basis.size());
    Mat<Q> G(d, std::vector<Q>(d, Q(0)));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            F v = invariant_form_q(basis[i], basis[j]);
            if (!is_zero(imag_part(v))) throw std::invalid_argument("gram_matrix: non-real form value");
            G[i][j] = G[j][i] = real_part(v);
        }
    return G;
}

inline Signature signature_Hp(int n, int p) { return signature_of_form(gram_matrix(build_Hp<Q>(n, p).basis)); }

// lambda_{k,r} with q(s^k Q, s^k B) = lambda q(Q, B) for all B in H_r. Null
// vectors (q(Q,Q) = 0) are handled by pairing against a basis element B with
// q(Q, B) != 0.
inline Q metric_multiplication_scaling(const QPoly& Qp, int k, const std::vector<QPoly>& partners) {
    if (Qp.is_zero()) throw std::invalid_argument("metric_multiplication_scaling: zero input");
    const int nv = Qp.nvars();
    QPoly sk = pow(minkowski_square<Q>(nv), k);
    std::vector<QPoly> cand{Qp};
    cand.insert(cand.end(), partners.begin(), partners.end());
    std::optional<Q> lambda;
    for (auto& B : cand) {
        Q q0 = invariant_form_q(Qp, B);
        Q q1 = invariant_form_q(sk * Qp, sk * B);
        if (q0 == 0) {
            if (q1 != 0) throw std::logic_error("metric_multiplication_scaling: not a scaling");
            continue;
        }
        Q l = q1 / q0;
        if (lambda && *lambda != l) throw std::logic_error("metric_multiplication_scaling: inconsistent ratio");
        lambda = l;
    }
    if (!lambda) throw std::invalid_argument("metric_multiplication_scaling: q(Q, .) vanishes on all partners");
    if (sgn(*lambda) <= 0) throw std::logic_error("metric_multiplication_scaling: lambda not positive");
    return *lambda;
}

inline Q metric_multiplication_scaling_formula(int n, int k, int r) {
    Q l = 1;
    for (int m = 1; m <= k; ++m) l *= box_power_constant(n, m, r);
    return l;
}

// ---- Restriction to hyperbolic space in the ball model ----

// u(x) = P((1+|x|^2)/(1-|x|^2), 2x/(1-|x|^2))
inline double restrict_to_ball(const QPoly& P, const std::vector<double>& x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    std::vector<double> X(x.size() + 1);
    X[0] = (1 + r2) / (1 - r2);
    for (std::size_t i = 0; i < x.size(); ++i) X[i + 1] = 2 * x[i] / (1 - r2);
    return eval_double(P, X);
}

// Delta_b u = rho^2 Delta u + (n-2) rho x.grad u for b = rho^{-2} delta,
// rho = (1-|x|^2)/2, with fourth-order central differences.
inline double hyperbolic_laplacian_fd(const std::function<double(const std::vector<double>&)>& u,
                                      const std::vector<double>& x, double h = 1e-3) {
    const int n = static_cast<int>(x.size());
    double r2 = 0;
    for (double v : x) r2 += v * v;
    const double rho = (1 - r2) / 2, u0 = u(x);
    double lap = 0, xgrad = 0;
    for (int i = 0; i < n; ++i) {
        auto at = [&](double t) {
            auto y = x;
            y[i] += t;
            return u(y);
        };
        double fp1 = at(h), fm1 = at(-h), fp2 = at(2 * h), fm2 = at(-2 * h);
        lap += (-fp2 + 16 * fp1 - 30 * u0 + 16 * fm1 - fm2) / (12 * h * h);
        xgrad += x[i] * (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
    }
    return rho * rho * lap + (n - 2) * rho * xgrad;
}

// Max |Delta_b u - p(p+n-1) u| over sample points; u is the restriction of P in H_p.
inline double check_restriction_eigenfunction(const QPoly& P, const std::vector<std::vector<double>>& points) {
    if (!P.is_homogeneous()) throw std::invalid_argument("eigenfunction check: P not homogeneous");
    const int n = P.nvars() - 1, p = P.is_zero() ? 0 : P.degree();
    double worst = 0;
    auto u = [&](const std::vector<double>& y) { return restrict_to_ball(P, y); };
    for (auto& x : points) {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        if (std::sqrt(r2) > 0.9) throw std::invalid_argument("eigenfunction check: sample too close to the boundary");
        double res = hyperbolic_laplacian_fd(u, x) - p * (p + n - 1) * u(x);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

// Pseudo-random points with |x| <= 3/4.
inline std::vector<std::vector<double>> ball_sample_points(int n, int count, unsigned seed = 7) {
    std::mt19937 g(seed);
    std::uniform_int_distribution<int> d(-1000, 1000);
    std::vector<std::vector<double>> pts;
    while (static_cast<int>(pts.size()) < count) {
        std::vector<double> x(n);
        double r2 = 0;
        for (auto& v : x) {
            v = d(g) / 1000.0 * 0.75;
            r2 += v * v;
        }
        if (r2 <= 0.75 * 0.75) pts.push_back(x);
    }
    return pts;
}

}  // namespace ahmass
