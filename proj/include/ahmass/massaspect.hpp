#pragma once
// Mass-aspect tensors on S^{n-1} as ambient symmetric polynomial tensors in
// x^1..x^n, the leading-order adjustment, sphere covariant derivatives and the
// Lorentz actions of weight k. Spatial indices are 0-based here: ambient index
// i corresponds to x^{i+1}.

#include "ahmass/lorentz.hpp"
#include "ahmass/poly.hpp"
#include "ahmass/tensor.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ahmass {

struct SphereTensor {
    int n = 0, k = 0;
    QTensor m;  // n x n, polynomial components in n variables
};

using TangentField = std::vector<QPoly>;

inline QPoly sx(int n, int i) { return QPoly::var(n, i); }

inline SphereTensor make_sphere_tensor(int n, int k) { return {n, k, QTensor(n, 2, n)}; }

// Canonical representative modulo |x|^2 = 1, componentwise.
inline QTensor sphere_reduce(const QTensor& T) {
    return T.map([](const QPoly& p) { return sphere_normal_form(p); });
}

// sigma = delta - x (x) x, the round metric written ambiently
inline QTensor round_metric(int n) {
    QTensor P(n, 2, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            P(a, b) = -(sx(n, a) * sx(n, b));
            if (a == b) P(a, b) += QPoly::constant(n, 1);
        }
    return P;
}

inline bool equal_on_sphere(const QTensor& a, const QTensor& b) {
    for (int f = 0; f < static_cast<int>(a.size()); ++f)
        if (!vanishes_on_sphere(a[f] - b[f])) return false;
    return true;
}

inline bool is_transverse(const QTensor& m) {
    const int n = m.dim();
    for (int i = 0; i < n; ++i) {
        QPoly c(n);
        for (int j = 0; j < n; ++j) c += m(i, j) * sx(n, j);
        if (!vanishes_on_sphere(c)) return false;
    }
    return true;
}

inline bool is_tangent(const TangentField& V) {
    const int n = static_cast<int>(V.size());
    QPoly c(n);
    for (int i = 0; i < n; ++i) c += V[i] * sx(n, i);
    return vanishes_on_sphere(c);
}

// (1+|x|^2)/2 d_i - x^i x^a d_a
inline TangentField boost_field(int n, int i) {
    TangentField X(n, QPoly(n));
    QPoly r2 = euclid_square<Q>(n);
    for (int a = 0; a < n; ++a) X[a] = -(sx(n, i) * sx(n, a));
    X[i] += (r2 + QPoly::constant(n, 1)) * Q(1, 2);
    return X;
}

// x^i d_j - x^j d_i
inline TangentField rotation_field(int n, int i, int j) {
    TangentField X(n, QPoly(n));
    X[j] = sx(n, i);
    X[i] = -sx(n, j);
    return X;
}

inline QPoly directional(const TangentField& X, const QPoly& f) {
    QPoly r(f.nvars());
    for (int a = 0; a < static_cast<int>(X.size()); ++a) r += X[a] * derivative(f, a);
    return r;
}

inline TangentField lie_bracket(const TangentField& X, const TangentField& Y) {
    TangentField Z(X.size(), QPoly(X[0].nvars()));
    for (std::size_t b = 0; b < X.size(); ++b) Z[b] = directional(X, Y[b]) - directional(Y, X[b]);
    return Z;
}

inline SphereTensor transversalize(const SphereTensor& in) {
    if (in.k == 0) throw std::invalid_argument("transversalize: k = 0");
    const int n = in.n;
    const Q invk = make_q(1, in.k);
    std::vector<QPoly> mx(n, QPoly(n));  // m_{ia} x^a
    QPoly xmx(n);
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < n; ++a) mx[i] += in.m(i, a) * sx(n, a);
        xmx += mx[i] * sx(n, i);
    }
    SphereTensor out = make_sphere_tensor(n, in.k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QPoly t = sx(n, i) * sx(n, j) * Q(in.k - 1);
            if (i == j) t += QPoly::constant(n, 1);
            out.m(i, j) = in.m(i, j) - mx[j] * sx(n, i) - mx[i] * sx(n, j) + xmx * t * invk;
        }
    return out;
}

inline void require_tangent(const TangentField& X) {
    if (!is_tangent(X)) throw std::invalid_argument("vector field not tangent to the sphere");
}

inline QPoly sphere_covariant_derivative(const QPoly& f, const TangentField& X) {
    require_tangent(X);
    return directional(X, f);
}

// Gauss formula: ambient derivative, then tangential projection.
inline TangentField sphere_covariant_derivative(const TangentField& V, const TangentField& X) {
    require_tangent(X);
    const int n = static_cast<int>(V.size());
    QTensor P = round_metric(n);
    std::vector<QPoly> D(n, QPoly(n));
    for (int b = 0; b < n; ++b) D[b] = directional(X, V[b]);
    TangentField out(n, QPoly(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out[a] += P(a, b) * D[b];
    return out;
}

// sigma T sigma = T - x (x) xT - Tx (x) x + (xTx) x (x) x
inline QTensor project(const QTensor& T) {
    const int n = T.dim();
    std::vector<QPoly> xT(n, QPoly(n)), Tx(n, QPoly(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            xT[b] += sx(n, a) * T(a, b);
            Tx[a] += T(a, b) * sx(n, b);
        }
    QPoly xTx(n);
    for (int a = 0; a < n; ++a) xTx += Tx[a] * sx(n, a);
    QTensor out = T;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) += (xTx * sx(n, j) - xT[j]) * sx(n, i) - Tx[i] * sx(n, j);
    return out;
}

inline QTensor sphere_covariant_derivative(const QTensor& T, const TangentField& X) {
    require_tangent(X);
    return project(T.map([&](const QPoly& p) { return directional(X, p); }));
}

inline QPoly sphere_trace(const QTensor& m) {
    QPoly t(m.nvars());
    for (int i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

inline void require_transverse(const SphereTensor& m) {
    if (!is_transverse(m.m)) throw std::invalid_argument("mass aspect is not transverse");
}

// a_i . m = -nabla_{a_i} m + k x^i m
inline SphereTensor boost_action(int i, const SphereTensor& m) {
    require_transverse(m);
    SphereTensor out = m;
    out.m = sphere_reduce(m.m.map([&](const QPoly& p) { return p * sx(m.n, i); }) * Q(m.k) -
                          sphere_covariant_derivative(m.m, boost_field(m.n, i)));
    return out;
}

// r_ij . m = -nabla_{r_ij} m - (m(r_ij ., .) + m(., r_ij .)), r_ij(U) = U^i d_j - U^j d_i
inline SphereTensor rotation_action(int i, int j, const SphereTensor& m) {
    require_transverse(m);
    const int n = m.n;
    QTensor rm(n, 2, n);
    for (int b = 0; b < n; ++b) {
        rm(i, b) += m.m(j, b);
        rm(j, b) -= m.m(i, b);
        rm(b, i) += m.m(b, j);
        rm(b, j) -= m.m(b, i);
    }
    SphereTensor out = m;
    out.m = sphere_reduce(QTensor(n, 2, n) - sphere_covariant_derivative(m.m, rotation_field(n, i, j)) - project(rm));
    return out;
}

// Action of a general element of so(n,1): coefficient of a_i is a[i][0], of
// r_ij (i < j) is a[j][i] (indices in R^{n,1}, spatial from 1).
inline SphereTensor algebra_action(const Mat<Q>& a, const SphereTensor& m) {
    const int n = m.n;
    SphereTensor out = make_sphere_tensor(n, m.k);
    for (int i = 1; i <= n; ++i)
        if (a[i][0] != 0) out.m += boost_action(i - 1, m).m * a[i][0];
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (a[j][i] != 0) out.m += rotation_action(i - 1, j - 1, m).m * a[j][i];
    return out;
}

// ---- Quadrature on S^{n-1} (normalized: weights sum to 1) ----

struct SphereQuadrature {
    int n = 0;
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;
};

// Gauss rule for the weight (1-t^2)^alpha on [-1, 1].
inline std::vector<std::pair<double, double>> gauss_gegenbauer(int order, double alpha) {
    std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> w(
        gsl_integration_fixed_alloc(gsl_integration_fixed_gegenbauer, order, -1.0, 1.0, alpha, 0.0),
        &gsl_integration_fixed_free);
    if (!w) throw std::runtime_error("gauss_gegenbauer: allocation failed");
    const double* x = gsl_integration_fixed_nodes(w.get());
    const double* c = gsl_integration_fixed_weights(w.get());
    std::vector<std::pair<double, double>> out(order);
    for (int i = 0; i < order; ++i) out[i] = {x[i], c[i]};
    return out;
}

// Nested slices: x_j = t_j * prod_{l<j} sqrt(1 - t_l^2) with a Gegenbauer rule
// for the slice measure (1-t^2)^{(n-3-j)/2} dt, trapezoid in the last circle.
// Exact for polynomials of degree < 2 * polar_order and < azimuth_order.
inline SphereQuadrature sphere_quadrature(int n, int polar_order, int azimuth_order) {
    if (n < 2) throw std::invalid_argument("sphere_quadrature: n < 2");
    const int npolar = n - 2;
    std::vector<std::vector<std::pair<double, double>>> rules;
    for (int j = 0; j < npolar; ++j) rules.push_back(gauss_gegenbauer(polar_order, (n - 3 - j) / 2.0));
    SphereQuadrature q;
    q.n = n;
    std::vector<int> idx(npolar, 0);
    double total = 0;
    while (true) {
        double w = 1, sprod = 1;
        std::vector<double> x(n);
        for (int j = 0; j < npolar; ++j) {
            const auto [t, c] = rules[j][idx[j]];
            x[j] = sprod * t;
            sprod *= std::sqrt(1 - t * t);
            w *= c;
        }
        for (int p = 0; p < azimuth_order; ++p) {
            const double ph = 2 * M_PI * p / azimuth_order;
            x[n - 2] = sprod * std::cos(ph);
            x[n - 1] = sprod * std::sin(ph);
            q.nodes.push_back(x);
            q.weights.push_back(w);
            total += w;
        }
        int j = 0;
        while (j < npolar && ++idx[j] == polar_order) idx[j++] = 0;
        if (j == npolar) break;
    }
    for (auto& w : q.weights) w /= total;
    return q;
}

inline SphereQuadrature default_sphere_quadrature(int n) {
    if (n == 2) return sphere_quadrature(2, 1, 64);
    if (n == 3) return sphere_quadrature(3, 32, 64);
    if (n == 4) return sphere_quadrature(4, 16, 32);
    return sphere_quadrature(n, 12, 24);
}

// Surface area of S^{n-1}
inline double sphere_volume(int n) { return 2 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0); }

using DMat = std::vector<std::vector<double>>;

inline DMat to_dmat(const Mat<Q>& A) {
    DMat d(A.size(), std::vector<double>(A[0].size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[i].size(); ++j) d[i][j] = A[i][j].get_d();
    return d;
}

inline DMat boost_matrix(int n, int i, double s) {
    DMat A(n + 1, std::vector<double>(n + 1, 0.0));
    for (int a = 0; a <= n; ++a) A[a][a] = 1;
    A[0][0] = A[i][i] = std::cosh(s);
    A[0][i] = A[i][0] = std::sinh(s);
    return A;
}

inline DMat lorentz_inverse(const DMat& A) {
    const int d = static_cast<int>(A.size());
    DMat B(d, std::vector<double>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) B[a][b] = eta_diag(a) * eta_diag(b) * A[b][a];
    return B;
}

inline DMat sample_tensor(const QTensor& m, const std::vector<double>& x) {
    const int n = m.dim();
    DMat v(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[i][j] = eval_double(m(i, j), x);
    return v;
}

// Double-precision evaluator for repeated sampling of one polynomial.
class CompiledPoly {
public:
    explicit CompiledPoly(const QPoly& p) : nv_(p.nvars()) {
        for (auto& [m, c] : p.terms()) {
            monos_.push_back(m);
            coef_.push_back(c.get_d());
            for (int i = 0; i < nv_; ++i) maxdeg_ = std::max(maxdeg_, static_cast<int>(m[i]));
        }
    }
    double operator()(const std::vector<double>& x) const {
        std::vector<double> pw(nv_ * (maxdeg_ + 1));
        for (int i = 0; i < nv_; ++i) {
            pw[i * (maxdeg_ + 1)] = 1;
            for (int e = 1; e <= maxdeg_; ++e) pw[i * (maxdeg_ + 1) + e] = pw[i * (maxdeg_ + 1) + e - 1] * x[i];
        }
        double s = 0;
        for (std::size_t t = 0; t < monos_.size(); ++t) {
            double v = coef_[t];
            for (int i = 0; i < nv_; ++i) v *= pw[i * (maxdeg_ + 1) + monos_[t][i]];
            s += v;
        }
        return s;
    }

private:
    int nv_, maxdeg_ = 0;
    std::vector<Mono> monos_;
    std::vector<double> coef_;
};

// (A.m)(x) = u[A](x)^{k-2} (Abar_* m)(x) at one point of the sphere, with
// Abar_* m = P J^T m(phi(x)) J P where phi is the boundary action of A^{-1}
// and J its differential.
inline DMat group_action_at(const DMat& A, const SphereTensor& m, const std::vector<double>& x) {
    const int n = m.n;
    DMat B = lorentz_inverse(A);
    double Y0 = B[0][0];
    std::vector<double> Ys(n);
    for (int a = 0; a < n; ++a) Y0 += B[0][a + 1] * x[a];
    for (int s = 0; s < n; ++s) {
        Ys[s] = B[s + 1][0];
        for (int a = 0; a < n; ++a) Ys[s] += B[s + 1][a + 1] * x[a];
    }
    if (Y0 <= 0) throw std::logic_error("group_action_at: non-orthochronous element");
    const double u = 1 / Y0;
    std::vector<double> phi(n);
    for (int s = 0; s < n; ++s) phi[s] = Ys[s] / Y0;
    DMat J(n, std::vector<double>(n));
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < n; ++a) J[s][a] = B[s + 1][a + 1] / Y0 - Ys[s] * B[0][a + 1] / (Y0 * Y0);
    // J P
    DMat JP(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) JP[s][a] += J[s][b] * ((b == a ? 1.0 : 0.0) - x[b] * x[a]);
    DMat mv = sample_tensor(m.m, phi);
    DMat out(n, std::vector<double>(n, 0.0));
    const double scale = std::pow(u, m.k - 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) s += JP[a][i] * mv[a][b] * JP[b][j];
            out[i][j] = scale * s;
        }
    return out;
}

inline std::vector<DMat> group_action_numeric(const DMat& A, const SphereTensor& m,
                                              const std::vector<std::vector<double>>& nodes) {
    std::vector<DMat> out;
    out.reserve(nodes.size());
    for (auto& x : nodes) out.push_back(group_action_at(A, m, x));
    return out;
}

inline std::vector<DMat> group_action_numeric(const LorentzElement& A, const SphereTensor& m,
                                              const std::vector<std::vector<double>>& nodes) {
    return group_action_numeric(to_dmat(A.A), m, nodes);
}

}  // namespace ahmass
