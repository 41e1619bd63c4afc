#pragma once
// Linear mass functionals on mass-aspect tensors: conformal masses (dual to
// H_{n1}), Weyl masses (dual to W_{n1}) and the chiral Weyl masses in
// dimension 3, with exact and numeric equivariance checks. Every mass is
// represented by an S^2-valued density D on the sphere,
//   Phi(m)(v) = int <m, D[v]> dmu / Vol(S^{n-1}).

#include "ahmass/harmonic.hpp"
#include "ahmass/massaspect.hpp"
#include "ahmass/weylspace.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahmass {

enum class MassFamily { conformal, weyl, weyl_plus, weyl_minus };

inline std::string to_string(MassFamily f) {
    switch (f) {
        case MassFamily::conformal: return "conformal";
        case MassFamily::weyl: return "weyl";
        case MassFamily::weyl_plus: return "weyl_plus";
        case MassFamily::weyl_minus: return "weyl_minus";
    }
    return "?";
}

inline MassFamily parse_family(const std::string& s) {
    if (s == "conformal") return MassFamily::conformal;
    if (s == "weyl") return MassFamily::weyl;
    if (s == "weyl+" || s == "weyl_plus") return MassFamily::weyl_plus;
    if (s == "weyl-" || s == "weyl_minus") return MassFamily::weyl_minus;
    throw std::invalid_argument("unknown mass family: " + s);
}

inline int family_weight(MassFamily f, int n, int n1) { return f == MassFamily::conformal ? n - 1 + n1 : n + 1 + n1; }

inline void require_weight(MassFamily f, const SphereTensor& m, int n1) {
    if (m.k != family_weight(f, m.n, n1))
        throw std::invalid_argument("mass: decay order k = " + std::to_string(m.k) + " does not match " + to_string(f) +
                                    " weight " + std::to_string(family_weight(f, m.n, n1)));
}

// Integral over the sphere (relative to its volume) of sum_ij a_ij b_ij,
// without materializing the products.
template <class F>
F sphere_pairing(const QTensor& a, const PolyTensor<F>& b) {
    F s(0);
    std::vector<int> e(a.nvars());
    for (int f = 0; f < static_cast<int>(a.size()); ++f) {
        if (a[f].is_zero() || b[f].is_zero()) continue;
        for (auto& [ma, ca] : a[f].terms())
            for (auto& [mb, cb] : b[f].terms()) {
                bool odd = false;
                for (int i = 0; i < a.nvars() && !odd; ++i) {
                    e[i] = ma[i] + mb[i];
                    odd = e[i] & 1;
                }
                if (!odd) s += F(ca * sphere_monomial_integral(e)) * cb;
            }
    }
    return s;
}

// ---- Densities ----

template <class F>
PolyTensor<F> lift_tensor(const QTensor& t) {
    return t.template cast<F>();
}

// P(1, x) sigma
template <class F>
PolyTensor<F> conformal_density(const Poly<F>& P) {
    const int n = P.nvars() - 1;
    Poly<F> b = dehomogenize_at_time_one(P);
    PolyTensor<F> sig = round_metric(n).template cast<F>();
    return sig.map([&](const Poly<F>& s) { return s * b; });
}

// Components of e_+ = (1, x) in n Euclidean variables.
template <class F>
std::vector<Poly<F>> null_position(int n) {
    std::vector<Poly<F>> e{Poly<F>::constant(n, F(1))};
    for (int i = 0; i < n; ++i) e.push_back(Poly<F>::var(n, i));
    return e;
}

// B_ij = W(e_+, d_i, e_+, d_j) at X = e_+, for spatial i, j.
template <class F>
PolyTensor<F> weyl_contraction(const PolyTensor<F>& W) {
    const int n = W.dim() - 1;
    auto e = null_position<F>(n);
    PolyTensor<F> B(n, 2, n);
    for (int mu = 0; mu <= n; ++mu)
        for (int nu = 0; nu <= n; ++nu) {
            Poly<F> ee = e[mu] * e[nu];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Poly<F>& w = W(mu, i + 1, nu, j + 1);
                    if (!w.is_zero()) B(i, j) += dehomogenize_at_time_one(w) * ee;
                }
        }
    return B;
}

template <class F>
PolyTensor<F> project_tensor(const PolyTensor<F>& T) {
    const int n = T.dim();
    std::vector<Poly<F>> xT(n, Poly<F>(n)), Tx(n, Poly<F>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            xT[b] += Poly<F>::var(n, a) * T(a, b);
            Tx[a] += T(a, b) * Poly<F>::var(n, b);
        }
    Poly<F> xTx(n);
    for (int a = 0; a < n; ++a) xTx += Tx[a] * Poly<F>::var(n, a);
    PolyTensor<F> out = T;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) += (xTx * Poly<F>::var(n, j) - xT[j]) * Poly<F>::var(n, i) - Tx[i] * Poly<F>::var(n, j);
    return out;
}

template <class F>
PolyTensor<F> weyl_density(const PolyTensor<F>& W) {
    if (W.rank() != 4) throw std::invalid_argument("weyl_density: rank-4 tensor expected");
    return project_tensor(weyl_contraction(W));
}

// ---- Complex structure on S^2 from the Hodge star on bivectors of R^{3,1} ----

// Orientation eps_{0123} = kVolumeSign; fixed so that J(d_2) = +d_3 at x = (-1, 0, 0).
inline constexpr int kVolumeSign = 1;

inline int levi_civita4(int a, int b, int c, int d) {
    int p[4] = {a, b, c, d};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] == p[j]) return 0;
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

// (*B)^{mu nu} = 1/2 eta^{mu mu} eta^{nu nu} eps_{mu nu a b} B^{ab}
inline std::vector<std::vector<QPoly>> hodge_star_bivector(const std::vector<std::vector<QPoly>>& B, int volume_sign = kVolumeSign) {
    const int nv = B[0][0].nvars();
    std::vector<std::vector<QPoly>> S(4, std::vector<QPoly>(4, QPoly(nv)));
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const int e = levi_civita4(m, n, a, b);
                    if (e == 0 || B[a][b].is_zero()) continue;
                    S[m][n] += B[a][b] * make_q(e * eta_diag(m) * eta_diag(n) * volume_sign, 2);
                }
    return S;
}

inline std::vector<std::vector<QPoly>> wedge(const std::vector<QPoly>& u, const std::vector<QPoly>& v) {
    const int d = static_cast<int>(u.size());
    std::vector<std::vector<QPoly>> B(d, std::vector<QPoly>(d, QPoly(u[0].nvars())));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) B[a][b] = u[a] * v[b] - u[b] * v[a];
    return B;
}

// J^l_i(x) with *(e_+ ^ X) = e_+ ^ J(X) for X = sigma(d_i), the tangential part
// of d_i; 0-based spatial indices. Throws if the star does not have that form
// on the sphere.
inline std::vector<std::vector<QPoly>> complex_structure_J(int volume_sign = kVolumeSign) {
    const int n = 3;
    auto e = null_position<Q>(n);
    std::vector<std::vector<QPoly>> J(n, std::vector<QPoly>(n, QPoly(n)));
    for (int i = 0; i < n; ++i) {
        std::vector<QPoly> X(4, QPoly(n));
        for (int a = 0; a < n; ++a) X[a + 1] = -(sx(n, i) * sx(n, a));
        X[i + 1] += QPoly::constant(n, 1);
        auto S = hodge_star_bivector(wedge(e, X), volume_sign);
        std::vector<QPoly> Y(4, QPoly(n));
        for (int l = 0; l < n; ++l) Y[l + 1] = S[0][l + 1];
        auto EY = wedge(e, Y);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                if (!vanishes_on_sphere(EY[a][b] - S[a][b]))
                    throw std::logic_error("complex_structure_J: star(e+ ^ X) is not of the form e+ ^ Y");
        for (int l = 0; l < n; ++l) J[l][i] = Y[l + 1];
    }
    return J;
}

// D_ij -> D_ij -/+ i sum_l J^l_i D_lj (Id -/+ iJ inserted in the first free slot)
inline CTensor chiral_twist(const CTensor& B, bool plus) {
    static const auto J = complex_structure_J();
    const int n = 3;
    CTensor out = B;
    const CQ f = plus ? CQ(Q(0), Q(-1)) : CQ(Q(0), Q(1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                if (!J[l][i].is_zero()) out(i, j) += J[l][i].cast<CQ>() * B(l, j) * f;
    return out;
}

inline CTensor chiral_weyl_density(const CTensor& W, bool plus) {
    if (W.dim() != 4) throw std::invalid_argument("chiral Weyl mass: n must be 3");
    return project_tensor(chiral_twist(weyl_contraction(W), plus));
}

// ---- Masses ----

inline Q conformal_mass(const SphereTensor& m, const QPoly& P) {
    if (P.nvars() != m.n + 1) throw std::invalid_argument("conformal_mass: dimension mismatch");
    if (!P.is_homogeneous()) throw std::invalid_argument("conformal_mass: P not homogeneous");
    require_weight(MassFamily::conformal, m, P.is_zero() ? m.k - m.n + 1 : P.degree());
    require_transverse(m);
    return sphere_pairing(m.m, conformal_density(P));
}

// (p_0, ..., p_n): pairing against 1 and the coordinate functions, k = n.
inline std::vector<Q> wang_mass_vector(const SphereTensor& m) {
    if (m.k != m.n) throw std::invalid_argument("wang_mass_vector: k must equal n");
    require_transverse(m);
    const int n = m.n;
    std::vector<Q> v;
    QPoly tr = sphere_trace(m.m);
    v.push_back(sphere_integral(tr));
    for (int i = 0; i < n; ++i) v.push_back(sphere_integral(tr * sx(n, i)));
    return v;
}

inline int tensor_degree(const PolyTensor<Q>& W) {
    for (int f = 0; f < static_cast<int>(W.size()); ++f)
        if (!W[f].is_zero()) return W[f].degree();
    return -1;
}

inline Q weyl_mass(const SphereTensor& m, const QTensor& W) {
    if (m.n < 4) throw std::invalid_argument("weyl_mass: n >= 4 required (use weyl_mass_chiral for n = 3)");
    if (W.dim() != m.n + 1) throw std::invalid_argument("weyl_mass: dimension mismatch");
    if (!satisfies_weyl_constraints(W)) throw std::invalid_argument("weyl_mass: W fails the Weyl constraints");
    const int d = tensor_degree(W);
    if (d >= 0) require_weight(MassFamily::weyl, m, d);
    require_transverse(m);
    return sphere_pairing(m.m, weyl_density(W));
}

inline CQ weyl_mass_chiral(const SphereTensor& m, const CTensor& W, bool plus) {
    if (m.n != 3) throw std::invalid_argument("weyl_mass_chiral: n must be 3");
    if (W.dim() != 4) throw std::invalid_argument("weyl_mass_chiral: dimension mismatch");
    if (!satisfies_weyl_constraints(W)) throw std::invalid_argument("weyl_mass_chiral: W fails the Weyl constraints");
    int d = -1;
    for (int f = 0; f < static_cast<int>(W.size()) && d < 0; ++f)
        if (!W[f].is_zero()) d = W[f].degree();
    if (d >= 0) require_weight(MassFamily::weyl_plus, m, d);
    require_transverse(m);
    return sphere_pairing(m.m, chiral_weyl_density(W, plus));
}

// ---- Target spaces ----

// Basis of H_{n1} or W_{n1} as complex tensors (polynomials as rank 0),
// with density and algebra action.
struct DualSpace {
    MassFamily family{};
    int n = 0, n1 = 0;
    std::vector<CTensor> basis;  // rank 0 for conformal, rank 4 otherwise

    int dim() const { return static_cast<int>(basis.size()); }
    int weight() const { return family_weight(family, n, n1); }

    CTensor density(const CTensor& v) const {
        switch (family) {
            case MassFamily::conformal: return conformal_density(v[0]);
            case MassFamily::weyl: return weyl_density(v);
            case MassFamily::weyl_plus: return chiral_weyl_density(v, true);
            case MassFamily::weyl_minus: return chiral_weyl_density(v, false);
        }
        throw std::logic_error("family");
    }
    CTensor act(const Mat<CQ>& a, const CTensor& v) const {
        if (family == MassFamily::conformal) {
            CTensor r(n + 1, 0, n + 1);
            r[0] = algebra_act_on_poly(a, v[0]);
            return r;
        }
        return algebra_act_on_tensor(a, v);
    }
};

inline CTensor as_scalar_tensor(const CPoly& p) {
    CTensor t(p.nvars(), 0, p.nvars());
    t[0] = p;
    return t;
}

inline DualSpace dual_space(MassFamily f, int n, int n1) {
    if (n1 < 0) throw std::invalid_argument("dual_space: n1 < 0");
    if ((f == MassFamily::weyl_plus || f == MassFamily::weyl_minus) && n != 3)
        throw std::invalid_argument("chiral Weyl masses exist only for n = 3");
    if (f == MassFamily::weyl && n < 4) throw std::invalid_argument("real Weyl masses need n >= 4");
    DualSpace D{f, n, n1, {}};
    if (f == MassFamily::conformal) {
        for (auto& P : build_Hp<Q>(n, n1).basis) D.basis.push_back(as_scalar_tensor(P.cast<CQ>()));
    } else {
        auto W = build_Wp(n, n1);
        for (int i = 0; i < W.dim(); ++i) D.basis.push_back(weyl_basis_tensor(W, i).cast<CQ>());
    }
    return D;
}

struct MassValue {
    MassFamily family{};
    int n = 0, n1 = 0, k = 0;
    std::vector<CQ> coefficients;  // Phi(m)(v_b) for each basis element v_b
};

inline MassValue mass_value(const DualSpace& D, const SphereTensor& m) {
    if (m.n != D.n) throw std::invalid_argument("mass_value: dimension mismatch");
    require_weight(D.family, m, D.n1);
    require_transverse(m);
    MassValue v{D.family, D.n, D.n1, m.k, {}};
    for (auto& b : D.basis) v.coefficients.push_back(sphere_pairing(m.m, D.density(b)));
    return v;
}

// ---- Equivariance ----

// Densities of the basis and of a . basis for every generator, reused across aspects.
struct EquivarianceData {
    const DualSpace* space = nullptr;
    std::vector<AlgebraElement> generators;
    std::vector<std::vector<CTensor>> moved;  // moved[g][b] = density(a_g . v_b)

    explicit EquivarianceData(const DualSpace& D) : space(&D), generators(all_generators(D.n)) {
        for (auto& g : generators) {
            const Mat<CQ> a = mat_cast<CQ>(g.m);
            std::vector<CTensor> row;
            for (auto& b : D.basis) row.push_back(D.density(D.act(a, b)));
            moved.push_back(std::move(row));
        }
        for (auto& b : D.basis) base.push_back(D.density(b));
    }
    std::vector<CTensor> base;
};

inline SphereTensor act_algebra(const AlgebraElement& g, const SphereTensor& m) { return algebra_action(g.m, m); }

// max_b |Phi(a.m)(v_b) + Phi(m)(a.v_b)| over basis elements, for generator index gi.
// enforce_weight = false evaluates at m.k as given (negative controls).
inline Q equivariance_residual(const EquivarianceData& E, const SphereTensor& m, int gi, bool enforce_weight = true) {
    if (enforce_weight) require_weight(E.space->family, m, E.space->n1);
    SphereTensor am = act_algebra(E.generators.at(gi), m);
    Q worst = 0;
    for (int b = 0; b < E.space->dim(); ++b) {
        CQ r = sphere_pairing(am.m, E.base[b]) + sphere_pairing(m.m, E.moved[gi][b]);
        Q a = abs(r.re) + abs(r.im);
        if (a > worst) worst = a;
    }
    return worst;
}

inline Q check_equivariance_infinitesimal(const EquivarianceData& E, const SphereTensor& m, bool enforce_weight = true) {
    Q worst = 0;
    for (int g = 0; g < static_cast<int>(E.generators.size()); ++g) worst = std::max<Q>(worst, equivariance_residual(E, m, g, enforce_weight));
    return worst;
}

// Numeric density of a (real) dual element at quadrature nodes.
class CompiledDensity {
public:
    explicit CompiledDensity(const QTensor& D) : n_(D.dim()) {
        for (int f = 0; f < static_cast<int>(D.size()); ++f) c_.emplace_back(D[f]);
    }
    double pair(const DMat& m, const std::vector<double>& x) const {
        double s = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += m[i][j] * c_[i * n_ + j](x);
        return s;
    }

private:
    int n_;
    std::vector<CompiledPoly> c_;
};

// max_b |Phi(A.m)(A.v_b) - Phi(m)(v_b)|, with Phi(A.m) by quadrature of order
// `order` (azimuth 2 * order). Real families only.
inline double check_equivariance_finite(const DualSpace& D, const SphereTensor& m, const LorentzElement& A, int order) {
    if (D.family != MassFamily::conformal && D.family != MassFamily::weyl)
        throw std::invalid_argument("check_equivariance_finite: real families only");
    require_weight(D.family, m, D.n1);
    require_transverse(m);
    auto q = sphere_quadrature(D.n, order, 2 * order);
    auto Am = group_action_numeric(A, m, q.nodes);
    double worst = 0;
    for (auto& b : D.basis) {
        const double exact = to_double(real_part(sphere_pairing(m.m, D.density(b))));
        CTensor Ab = b.rank() == 4 ? act_on_tensor(A, b) : as_scalar_tensor(act_on_poly(A, b[0]));
        CTensor dens = D.density(Ab);
        QTensor rd(dens.dim(), 2, dens.nvars());
        for (int f = 0; f < static_cast<int>(dens.size()); ++f) rd[f] = real_part(dens[f]);
        CompiledDensity cd(rd);
        double s = 0;
        for (std::size_t a = 0; a < q.nodes.size(); ++a) s += q.weights[a] * cd.pair(Am[a], q.nodes[a]);
        worst = std::max(worst, std::abs(s - exact));
    }
    return worst;
}

// ---- Intertwining densities ----

// V-valued density: comps[mu] is an S^2 tensor, rep(a) the matrix of a on V
// in the basis v_mu (a . v_mu = sum_nu rep(a)[nu][mu] v_nu).
struct TensorDensity {
    int n = 0;
    std::vector<QTensor> comps;
    std::function<Mat<Q>(const Mat<Q>&)> rep;
};

inline TensorDensity trivial_density(int n) {
    return {n, {round_metric(n)}, [](const Mat<Q>&) { return Mat<Q>(1, std::vector<Q>(1, Q(0))); }};
}

// e_+^{(x) n1} sigma with V = (R^{n,1})^{(x) n1}
inline TensorDensity null_power_density(int n, int n1) {
    const int d = n + 1;
    int dimV = 1;
    for (int s = 0; s < n1; ++s) dimV *= d;
    auto e = null_position<Q>(n);
    QTensor sig = round_metric(n);
    TensorDensity T{n, {}, nullptr};
    for (int mu = 0; mu < dimV; ++mu) {
        QPoly c = QPoly::constant(n, 1);
        for (int s = 0, r = mu; s < n1; ++s, r /= d) c = c * e[r % d];
        T.comps.push_back(sig.map([&](const QPoly& p) { return p * c; }));
    }
    T.rep = [d, n1, dimV](const Mat<Q>& a) {
        Mat<Q> R(dimV, std::vector<Q>(dimV, Q(0)));
        for (int mu = 0; mu < dimV; ++mu) {
            std::vector<int> idx(n1);
            for (int s = 0, r = mu; s < n1; ++s, r /= d) idx[s] = r % d;
            int stride = 1;
            for (int s = 0; s < n1; ++s, stride *= d)
                for (int l = 0; l < d; ++l) {
                    if (is_zero(a[l][idx[s]])) continue;
                    R[mu + (l - idx[s]) * stride][mu] += a[l][idx[s]];
                }
        }
        return R;
    };
    return T;
}

struct IntertwiningResidual {
    Q boost = 0, rotation = 0;  // max over generators and components of int |res|^2
};

inline Q sphere_l2(const QTensor& T) {
    QTensor r = sphere_reduce(T);
    Q s = 0;
    for (int f = 0; f < static_cast<int>(r.size()); ++f)
        if (!r[f].is_zero()) s += sphere_integral(r[f] * r[f]);
    return s;
}

// Residuals of
//   nabla_{a_i} Phi + (k+1-n) x^i Phi - sum_mu Phi^mu a_i . v_mu
//   nabla_{r_ij} Phi + Phi(r_ij ., .) + Phi(., r_ij .) - sum_mu Phi^mu r_ij . v_mu
inline IntertwiningResidual intertwining_density_residual(const TensorDensity& T, int k) {
    const int n = T.n;
    for (auto& c : T.comps)
        if (c.dim() != n || c.rank() != 2) throw std::invalid_argument("intertwining: components must be n x n tensors");
    const int dv = static_cast<int>(T.comps.size());
    IntertwiningResidual res;
    auto rep_sum = [&](const Mat<Q>& R, int nu) {
        QTensor s(n, 2, n);
        for (int mu = 0; mu < dv; ++mu)
            if (!is_zero(R[nu][mu])) s += T.comps[mu] * R[nu][mu];
        return s;
    };
    for (int i = 0; i < n; ++i) {
        auto R = T.rep(boost_generator(n, i + 1).m);
        auto field = boost_field(n, i);
        for (int nu = 0; nu < dv; ++nu) {
            QTensor r = sphere_covariant_derivative(T.comps[nu], field) +
                        T.comps[nu].map([&](const QPoly& p) { return p * sx(n, i); }) * Q(k + 1 - n) - rep_sum(R, nu);
            res.boost = std::max<Q>(res.boost, sphere_l2(r));
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto R = T.rep(rotation_generator(n, i + 1, j + 1).m);
            auto field = rotation_field(n, i, j);
            for (int nu = 0; nu < dv; ++nu) {
                const QTensor& m = T.comps[nu];
                QTensor rm(n, 2, n);
                for (int b = 0; b < n; ++b) {
                    rm(i, b) += m(j, b);
                    rm(j, b) -= m(i, b);
                    rm(b, i) += m(b, j);
                    rm(b, j) -= m(b, i);
                }
                QTensor r = sphere_covariant_derivative(m, field) + project(rm) - rep_sum(R, nu);
                res.rotation = std::max<Q>(res.rotation, sphere_l2(r));
            }
        }
    return res;
}

}  // namespace ahmass
