#pragma once
// Orthochronous Lorentz group O(n,1) and its Lie algebra acting on Minkowski
// space, the Poincare ball and polynomial tensors.
//
// Conventions. eta = diag(-1, 1, ..., 1). A matrix M acts on vectors by
// (MV)^l = M[l][m] V^m. Generators: a_i = dX^0 d_i + dX^i d_0 and
// r_ij = dX^i d_j - dX^j d_i, so a_i(d_0) = d_i and r_ij(d_i) = d_j.
// Groups act on functions by P -> P o A^{-1}; the algebra acts by the
// derivative at s = 0 of P o A^{-s}, i.e. a.P = -(aX)^m d_m P. Under this
// convention r_23 . X^2 = X^3.

#include "ahmass/linalg.hpp"
#include "ahmass/poly.hpp"
#include "ahmass/tensor.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahmass {

struct LorentzElement {
    int n = 0;
    Mat<Q> A;  // (n+1) x (n+1)
};

template <class F>
struct Generator {
    int n = 0;
    Mat<F> m;
    std::string name;
};
using AlgebraElement = Generator<Q>;

inline Mat<Q> eta_matrix(int n) {
    Mat<Q> e = identity_matrix<Q>(n + 1);
    e[0][0] = -1;
    return e;
}

inline bool preserves_eta(const Mat<Q>& A) {
    const int d = static_cast<int>(A.size());
    Mat<Q> eta = eta_matrix(d - 1);
    return matmul(matmul(transpose(A), eta), A) == eta;
}

inline LorentzElement make_lorentz(const Mat<Q>& A) {
    const int d = static_cast<int>(A.size());
    if (d < 2) throw std::invalid_argument("dimension");
    if (!preserves_eta(A)) throw std::invalid_argument("matrix does not preserve eta");
    if (sgn(A[0][0]) <= 0) throw std::invalid_argument("not orthochronous");
    return {d - 1, A};
}

inline LorentzElement identity_element(int n) { return {n, identity_matrix<Q>(n + 1)}; }

inline LorentzElement compose(const LorentzElement& a, const LorentzElement& b) {
    return {a.n, matmul(a.A, b.A)};
}

// For O(n,1): A^{-1} = eta A^T eta.
inline LorentzElement inverse(const LorentzElement& a) {
    Mat<Q> eta = eta_matrix(a.n);
    return {a.n, matmul(matmul(eta, transpose(a.A)), eta)};
}

// Boost in direction i (1-based spatial index) with cosh -> c, sinh -> s.
inline LorentzElement rational_boost(int n, int i, const Q& c, const Q& s) {
    if (i < 1 || i > n) throw std::invalid_argument("boost direction");
    if (c * c - s * s != 1 || sgn(c) <= 0) throw std::invalid_argument("(c,s) not on the unit hyperbola");
    Mat<Q> A = identity_matrix<Q>(n + 1);
    A[0][0] = c;
    A[0][i] = s;
    A[i][0] = s;
    A[i][i] = c;
    return {n, A};
}

// Rotation exp(theta r_ij) with cos -> c, sin -> s: d_i -> c d_i + s d_j.
inline LorentzElement rational_rotation(int n, int i, int j, const Q& c, const Q& s) {
    if (i < 1 || j < 1 || i > n || j > n || i == j) throw std::invalid_argument("rotation plane");
    if (c * c + s * s != 1) throw std::invalid_argument("(c,s) not on the unit circle");
    Mat<Q> A = identity_matrix<Q>(n + 1);
    A[i][i] = c;
    A[j][j] = c;
    A[j][i] = s;
    A[i][j] = -s;
    return {n, A};
}

inline AlgebraElement boost_generator(int n, int i) {
    Mat<Q> m(n + 1, std::vector<Q>(n + 1, Q(0)));
    m[i][0] = 1;
    m[0][i] = 1;
    return {n, m, "a" + std::to_string(i)};
}

inline AlgebraElement rotation_generator(int n, int i, int j) {
    Mat<Q> m(n + 1, std::vector<Q>(n + 1, Q(0)));
    m[j][i] = 1;
    m[i][j] = -1;
    return {n, m, "r" + std::to_string(i) + std::to_string(j)};
}

inline std::vector<AlgebraElement> all_generators(int n) {
    std::vector<AlgebraElement> g;
    for (int i = 1; i <= n; ++i) g.push_back(boost_generator(n, i));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) g.push_back(rotation_generator(n, i, j));
    return g;
}

template <class F>
Generator<F> bracket(const Generator<F>& a, const Generator<F>& b) {
    return {a.n, mat_add(matmul(a.m, b.m), matmul(b.m, a.m), F(-1)), "[" + a.name + "," + b.name + "]"};
}

template <class F>
bool is_infinitesimal_isometry(const Mat<F>& a) {
    const int d = static_cast<int>(a.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (F(Q(eta_diag(i))) * a[i][j] != -(F(Q(eta_diag(j))) * a[j][i])) return false;
    return true;
}

template <class G, class F>
Generator<G> gen_cast(const Generator<F>& g) {
    return {g.n, mat_cast<G>(g.m), g.name};
}

// ---- Poincare ball ----

// p^{-1}(x) = ((1+|x|^2), 2x) / (1-|x|^2)
inline std::vector<Q> ball_to_hyperboloid(const std::vector<Q>& x) {
    Q r2 = 0;
    for (auto& v : x) r2 += v * v;
    if (r2 >= 1) throw std::invalid_argument("point outside the unit ball");
    std::vector<Q> X(x.size() + 1);
    Q den = 1 - r2;
    X[0] = (1 + r2) / den;
    for (std::size_t i = 0; i < x.size(); ++i) X[i + 1] = 2 * x[i] / den;
    return X;
}

inline std::vector<Q> hyperboloid_to_ball(const std::vector<Q>& X) {
    std::vector<Q> x(X.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = X[i + 1] / (1 + X[0]);
    return x;
}

template <class F>
std::vector<F> mat_apply(const Mat<F>& A, const std::vector<F>& v) {
    std::vector<F> r(A.size(), F(0));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += A[i][j] * v[j];
    return r;
}

inline std::vector<Q> ball_action(const LorentzElement& A, const std::vector<Q>& x) {
    auto y = hyperboloid_to_ball(mat_apply(A.A, ball_to_hyperboloid(x)));
    Q r2 = 0;
    for (auto& v : y) r2 += v * v;
    if (r2 >= 1) throw std::logic_error("ball action left the unit ball");
    return y;
}

// Boundary action on the sphere: xhat -> spatial part of A(1,xhat), rescaled to time 1.
inline std::vector<Q> sphere_action(const LorentzElement& A, const std::vector<Q>& xhat) {
    std::vector<Q> v(xhat.size() + 1);
    v[0] = 1;
    for (std::size_t i = 0; i < xhat.size(); ++i) v[i + 1] = xhat[i];
    auto w = mat_apply(A.A, v);
    std::vector<Q> y(xhat.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = w[i + 1] / w[0];
    return y;
}

// u[A](xhat) = 1 / X^0(A^{-1}(1, xhat))
inline Q u_of_A(const LorentzElement& A, const std::vector<Q>& xhat) {
    std::vector<Q> v(xhat.size() + 1);
    v[0] = 1;
    for (std::size_t i = 0; i < xhat.size(); ++i) v[i + 1] = xhat[i];
    auto w = mat_apply(inverse(A).A, v);
    if (sgn(w[0]) <= 0) throw std::logic_error("non-future null image");
    return 1 / w[0];
}

// ---- Actions on polynomials and covariant tensors ----

template <class F>
Poly<F> act_on_poly(const Mat<F>& Ainv, const Poly<F>& p) {
    return linear_substitute(p, Ainv);
}

template <class F>
Poly<F> act_on_poly(const LorentzElement& A, const Poly<F>& p) {
    return linear_substitute(p, mat_cast<F>(inverse(A).A));
}

// -(aX)^m d_m P
template <class F>
Poly<F> algebra_act_on_poly(const Mat<F>& a, const Poly<F>& p) {
    const int d = p.nvars();
    Poly<F> r(d);
    for (int mu = 0; mu < d; ++mu) {
        Poly<F> dp = derivative(p, mu);
        if (dp.is_zero()) continue;
        Poly<F> aX(d);
        for (int nu = 0; nu < d; ++nu)
            if (!is_zero(a[mu][nu])) aX.add_term(unit_mono(nu), a[mu][nu]);
        r -= aX * dp;
    }
    return r;
}

template <class F>
Poly<F> algebra_act_on_poly(const Generator<F>& a, const Poly<F>& p) {
    return algebra_act_on_poly(a.m, p);
}

// (a.T)_{m1..mr} = -(aX)^l d_l T_{m1..mr} - sum_s a^l_{ms} T_{..l..}
template <class F>
PolyTensor<F> algebra_act_on_tensor(const Mat<F>& a, const PolyTensor<F>& t) {
    const int d = t.dim();
    PolyTensor<F> r(d, t.rank(), t.nvars());
    for (int f = 0; f < static_cast<int>(t.size()); ++f) r[f] = algebra_act_on_poly(a, t[f]);
    for (int f = 0; f < static_cast<int>(t.size()); ++f) {
        auto idx = t.unflat(f);
        for (int s = 0; s < t.rank(); ++s) {
            const int ms = idx[s];
            for (int l = 0; l < d; ++l) {
                if (is_zero(a[l][ms])) continue;
                auto j = idx;
                j[s] = l;
                r[f] -= t.at(j) * a[l][ms];
            }
        }
    }
    return r;
}

// (A.T)(X)(V, ...) = T(A^{-1}X)(A^{-1}V, ...)
template <class F>
PolyTensor<F> act_on_tensor(const LorentzElement& A, const PolyTensor<F>& t) {
    const Mat<F> Ai = mat_cast<F>(inverse(A).A);
    const int d = t.dim();
    PolyTensor<F> moved = t.map([&](const Poly<F>& p) { return linear_substitute(p, Ai); });
    PolyTensor<F> r(d, t.rank(), t.nvars());
    for (int f = 0; f < static_cast<int>(t.size()); ++f) {
        auto idx = t.unflat(f);
        // sum over all preimage indices
        std::vector<int> j(t.rank(), 0);
        while (true) {
            F w(1);
            for (int s = 0; s < t.rank() && !is_zero(w); ++s) w *= Ai[j[s]][idx[s]];
            if (!is_zero(w)) r[f] += moved.at(j) * w;
            int s = t.rank() - 1;
            while (s >= 0 && ++j[s] == d) j[s--] = 0;
            if (s < 0) break;
        }
    }
    return r;
}

// ---- Complexification, weights and highest weight vectors ----
//
// Null basis: e_{+1} = -d_0 + d_1, e_{-1} = (d_0 + d_1)/2,
// e_{+k} = d_{2k-2} + i d_{2k-1}, e_{-k} = (d_{2k-2} - i d_{2k-1})/2 for k >= 2,
// e_0 = d_n when n+1 is odd. eta(e_a, e_b) = delta_{a,-b}.
// Coordinates Z^a = eta(X, e_{-a}); Z^{-1} = X^0 + X^1, Z^{-2} = X^2 + i X^3.

inline int lorentz_rank(int n) { return (n + 1) / 2; }

inline std::vector<CQ> null_basis_vector(int n, int a) {
    std::vector<CQ> v(n + 1, CQ(0));
    const Q half(1, 2);
    if (a == 0) {
        if ((n + 1) % 2 == 0) throw std::invalid_argument("no e_0 in even dimension");
        v[n] = CQ(1);
    } else if (a == 1) {
        v[0] = CQ(-1);
        v[1] = CQ(1);
    } else if (a == -1) {
        v[0] = CQ(half);
        v[1] = CQ(half);
    } else {
        const int k = a > 0 ? a : -a;
        if (k > lorentz_rank(n)) throw std::invalid_argument("null basis label");
        if (a > 0) {
            v[2 * k - 2] = CQ(1);
            v[2 * k - 1] = CQ(Q(0), Q(1));
        } else {
            v[2 * k - 2] = CQ(half);
            v[2 * k - 1] = CQ(Q(0), -half);
        }
    }
    return v;
}

inline CQ eta_pair(const std::vector<CQ>& u, const std::vector<CQ>& v) {
    CQ s(0);
    for (std::size_t i = 0; i < u.size(); ++i) s += CQ(Q(eta_diag(static_cast<int>(i)))) * u[i] * v[i];
    return s;
}

// Z^a = eta(X, e_{-a}) as a linear polynomial.
inline CPoly z_coordinate(int n, int a) {
    auto e = null_basis_vector(n, -a);
    CPoly z(n + 1);
    for (int mu = 0; mu <= n; ++mu) z.add_term(unit_mono(mu), CQ(Q(eta_diag(mu))) * e[mu]);
    return z;
}

// dZ^a as a covector (components).
inline std::vector<CQ> dz_covector(int n, int a) {
    auto e = null_basis_vector(n, -a);
    std::vector<CQ> c(n + 1);
    for (int mu = 0; mu <= n; ++mu) c[mu] = CQ(Q(eta_diag(mu))) * e[mu];
    return c;
}

// E_{a,b} = e_a (x) eta(e_b, .) - e_b (x) eta(e_a, .), of weight wt(a) + wt(b).
inline Generator<CQ> root_vector(int n, int a, int b) {
    auto ea = null_basis_vector(n, a), eb = null_basis_vector(n, b);
    Mat<CQ> m(n + 1, std::vector<CQ>(n + 1, CQ(0)));
    for (int l = 0; l <= n; ++l)
        for (int mu = 0; mu <= n; ++mu) {
            CQ etab = CQ(Q(eta_diag(mu))) * eb[mu], etaa = CQ(Q(eta_diag(mu))) * ea[mu];
            m[l][mu] = ea[l] * etab - eb[l] * etaa;
        }
    return {n, m, "E(" + std::to_string(a) + "," + std::to_string(b) + ")"};
}

inline std::vector<Generator<CQ>> cartan_generators(int n) {
    std::vector<Generator<CQ>> h;
    for (int k = 1; k <= lorentz_rank(n); ++k) {
        auto g = root_vector(n, k, -k);
        g.name = "H" + std::to_string(k);
        h.push_back(g);
    }
    return h;
}

// Positive roots eps_j +- eps_k (j < k) and eps_j (odd n+1).
inline std::vector<Generator<CQ>> positive_root_vectors(int n) {
    std::vector<Generator<CQ>> r;
    const int rk = lorentz_rank(n);
    for (int j = 1; j <= rk; ++j) {
        for (int k = j + 1; k <= rk; ++k) {
            r.push_back(root_vector(n, j, k));
            r.push_back(root_vector(n, j, -k));
        }
        if ((n + 1) % 2 == 1) r.push_back(root_vector(n, j, 0));
    }
    return r;
}

// The ladder operators built from s_A = a_A + r_{1A}:
// X_{e1-ek} = (s_{2k-2} + i s_{2k-1}) / 2, X_{e1+ek} = s_{2k-2} - i s_{2k-1}, X_{e1} = s_n.
inline std::vector<Generator<CQ>> paper_ladder_operators(int n) {
    auto s = [&](int A) {
        auto a = gen_cast<CQ>(boost_generator(n, A));
        auto r = gen_cast<CQ>(rotation_generator(n, 1, A));
        return mat_add(a.m, r.m);
    };
    std::vector<Generator<CQ>> out;
    const Q half(1, 2);
    for (int k = 2; k <= lorentz_rank(n); ++k) {
        auto sa = s(2 * k - 2), sb = s(2 * k - 1);
        Mat<CQ> minus = mat_add(sa, sb, CQ(Q(0), Q(1)));
        for (auto& row : minus)
            for (auto& x : row) x *= CQ(half);
        out.push_back({n, minus, "X(e1-e" + std::to_string(k) + ")"});
        out.push_back({n, mat_add(sa, sb, CQ(Q(0), Q(-1))), "X(e1+e" + std::to_string(k) + ")"});
    }
    if ((n + 1) % 2 == 1) out.push_back({n, s(n), "X(e1)"});
    return out;
}

// Joint kernel inside span(cands): returns coefficient vectors c with
// op(sum_j c_j cand_j) = 0 for every op. `apply_op(i, v)` evaluates op i on a
// candidate and flattens it into (component, monomial) coefficients.
template <class F, class V>
std::vector<std::vector<F>> joint_kernel(
    const std::vector<V>& cands, int nops,
    const std::function<std::map<std::pair<int, Mono>, F>(int, const V&)>& apply_op) {
    const int m = static_cast<int>(cands.size());
    std::map<std::pair<int, std::pair<int, Mono>>, std::map<int, F>> rows;
    for (int op = 0; op < nops; ++op)
        for (int j = 0; j < m; ++j)
            for (auto& [key, c] : apply_op(op, cands[j]))
                if (!is_zero(c)) rows[{op, key}][j] += c;
    std::vector<SparseVec<F>> sr;
    for (auto& [k, r] : rows) sr.push_back(to_sparse(r));
    std::vector<std::vector<F>> out;
    for (auto& v : nullspace(sr, m)) out.push_back(to_dense(v, m));
    return out;
}

// Highest weight vectors of a given weight inside span(basis), for a
// representation given by `act` (algebra element, vector) -> vector.
// The weight lists the eigenvalues of H_1, ..., H_r.
template <class V>
std::vector<V> highest_weight_vectors(int n, const std::vector<V>& basis, const std::vector<Q>& weight,
                                      const std::function<V(const Mat<CQ>&, const V&)>& act) {
    auto H = cartan_generators(n);
    auto E = positive_root_vectors(n);
    if (weight.size() != H.size()) throw std::invalid_argument("weight length");
    std::vector<Mat<CQ>> ops;
    for (auto& e : E) ops.push_back(e.m);
    const int nE = static_cast<int>(ops.size());
    for (auto& h : H) ops.push_back(h.m);
    std::function<std::map<std::pair<int, Mono>, CQ>(int, const V&)> ap = [&](int i, const V& v) {
        std::map<std::pair<int, Mono>, CQ> out;
        flatten_into(act(ops[i], v), out);
        if (i >= nE) flatten_into(v, out, CQ(-weight[i - nE]));
        return out;
    };
    auto ker = joint_kernel<CQ, V>(basis, static_cast<int>(ops.size()), ap);
    if (ker.empty()) return {};
    std::vector<V> out;
    for (auto& c : ker) {
        V v = basis[0] * CQ(0);
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (!is_zero(c[j])) v += basis[j] * c[j];
        out.push_back(v);
    }
    return out;
}

// Weight of a weight vector v (nullopt if v is not one).
template <class V>
std::optional<std::vector<CQ>> weight_of(int n, const V& v, const std::function<V(const Mat<CQ>&, const V&)>& act) {
    std::vector<CQ> w;
    std::map<std::pair<int, Mono>, CQ> fv;
    flatten_into(v, fv);
    if (fv.empty()) return std::nullopt;
    auto ref = *fv.begin();
    for (auto& h : cartan_generators(n)) {
        std::map<std::pair<int, Mono>, CQ> fh;
        flatten_into(act(h.m, v), fh);
        CQ lam = fh.count(ref.first) ? fh[ref.first] / ref.second : CQ(0);
        std::map<std::pair<int, Mono>, CQ> diff = fh;
        for (auto& [k, c] : fv) diff[k] -= lam * c;
        for (auto& [k, c] : diff)
            if (!is_zero(c)) return std::nullopt;
        w.push_back(lam);
    }
    return w;
}

}  // namespace ahmass
