#pragma once
// Sparse multivariate polynomials over Q or Q(i), plus the two quadric
// reductions used everywhere: the unit sphere |x|^2 = 1 in Euclidean variables
// and the hyperboloid X^mu X_mu = -1 in Minkowski variables (X^0 first).

#include "ahmass/field.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahmass {

constexpr int kMaxVars = 8;
using Mono = std::array<std::uint8_t, kMaxVars>;

inline int mono_degree(const Mono& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

inline Mono unit_mono(int i) {
    Mono m{};
    m[i] = 1;
    return m;
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono m{};
    for (int i = 0; i < kMaxVars; ++i) {
        int e = a[i] + b[i];
        if (e > 255) throw std::overflow_error("monomial exponent overflow");
        m[i] = static_cast<std::uint8_t>(e);
    }
    return m;
}

// Bit i set iff exponent i is odd. Reflections X^i -> -X^i act by this sign.
inline unsigned mono_parity(const Mono& m) {
    unsigned bits = 0;
    for (int i = 0; i < kMaxVars; ++i)
        if (m[i] & 1) bits |= 1u << i;
    return bits;
}

// All exponent vectors of total degree d in nv variables, in lexicographic order.
inline std::vector<Mono> monomials_of_degree(int nv, int d) {
    std::vector<Mono> out;
    if (d < 0) return out;
    Mono cur{};
    auto rec = [&](auto&& self, int var, int left) -> void {
        if (var == nv - 1) {
            cur[var] = static_cast<std::uint8_t>(left);
            out.push_back(cur);
            cur[var] = 0;
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[var] = static_cast<std::uint8_t>(e);
            self(self, var + 1, left - e);
        }
        cur[var] = 0;
    };
    if (nv == 0) {
        if (d == 0) out.push_back(cur);
        return out;
    }
    rec(rec, 0, d);
    return out;
}

template <class F>
class Poly {
public:
    using Terms = std::map<Mono, F>;

    Poly() = default;
    explicit Poly(int nv) : nv_(nv) {
        if (nv < 0 || nv > kMaxVars) throw std::invalid_argument("variable count out of range");
    }

    static Poly constant(int nv, const F& c) {
        Poly p(nv);
        p.add_term(Mono{}, c);
        return p;
    }
    static Poly var(int nv, int i, const F& c = F(1)) {
        Poly p(nv);
        p.add_term(unit_mono(i), c);
        return p;
    }
    static Poly monomial(int nv, const Mono& m, const F& c = F(1)) {
        Poly p(nv);
        p.add_term(m, c);
        return p;
    }

    int nvars() const { return nv_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    F coeff(const Mono& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? F(0) : it->second;
    }

    void add_term(const Mono& m, const F& c) {
        if (ahmass::is_zero(c)) return;
        auto [it, inserted] = t_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (ahmass::is_zero(it->second)) t_.erase(it);
        }
    }

    int degree() const {
        int d = -1;
        for (auto& [m, c] : t_) d = std::max(d, mono_degree(m));
        return d;
    }

    bool is_homogeneous() const {
        int d = -1;
        for (auto& [m, c] : t_) {
            int e = mono_degree(m);
            if (d >= 0 && e != d) return false;
            d = e;
        }
        return true;
    }

    Poly& operator+=(const Poly& o) {
        unify(o);
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        unify(o);
        for (auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const F& s) {
        if (ahmass::is_zero(s)) {
            t_.clear();
            return *this;
        }
        for (auto& [m, c] : t_) c *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& [m, c] : a.t_) c = -c;
        return a;
    }
    friend Poly operator*(Poly a, const F& s) { return a *= s; }
    friend Poly operator*(const F& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(std::max(a.nv_, b.nv_));
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    template <class G>
    Poly<G> cast() const {
        Poly<G> r(nv_);
        for (auto& [m, c] : t_) r.add_term(m, G(c));
        return r;
    }

private:
    void check(const Poly& o) const {
        if (nv_ != o.nv_ && !t_.empty() && !o.t_.empty())
            throw std::invalid_argument("variable-count mismatch");
    }
    // A zero polynomial adopts the other operand's variable count.
    void unify(const Poly& o) {
        check(o);
        if (t_.empty()) nv_ = std::max(nv_, o.nv_);
    }

    int nv_ = 0;
    Terms t_;

    template <class G> friend class Poly;
};

using QPoly = Poly<Q>;
using CPoly = Poly<CQ>;

template <class F>
Poly<F> pow(const Poly<F>& p, int k) {
    Poly<F> r = Poly<F>::constant(p.nvars(), F(1));
    for (int i = 0; i < k; ++i) r = r * p;
    return r;
}

template <class F>
Poly<F> derivative(const Poly<F>& p, int i) {
    Poly<F> r(p.nvars());
    for (auto& [m, c] : p.terms()) {
        if (m[i] == 0) continue;
        Mono d = m;
        d[i] -= 1;
        r.add_term(d, c * F(Q(m[i])));
    }
    return r;
}

// Euler operator X^mu d_mu.
template <class F>
Poly<F> euler(const Poly<F>& p) {
    Poly<F> r(p.nvars());
    for (auto& [m, c] : p.terms()) r.add_term(m, c * F(Q(mono_degree(m))));
    return r;
}

template <class F>
Poly<F> homogeneous_part(const Poly<F>& p, int d) {
    Poly<F> r(p.nvars());
    for (auto& [m, c] : p.terms())
        if (mono_degree(m) == d) r.add_term(m, c);
    return r;
}

inline QPoly real_part(const CPoly& p) {
    QPoly r(p.nvars());
    for (auto& [m, c] : p.terms()) r.add_term(m, c.re);
    return r;
}
inline QPoly imag_part(const CPoly& p) {
    QPoly r(p.nvars());
    for (auto& [m, c] : p.terms()) r.add_term(m, c.im);
    return r;
}
inline CPoly conj(const CPoly& p) {
    CPoly r(p.nvars());
    for (auto& [m, c] : p.terms()) r.add_term(m, conj(c));
    return r;
}
inline QPoly conj(const QPoly& p) { return p; }

// Evaluation in any commutative ring T that accepts coefficients through `lift`.
template <class F, class T, class Lift>
T eval_with(const Poly<F>& p, const std::vector<T>& x, Lift lift) {
    T acc = lift(F(0));
    for (auto& [m, c] : p.terms()) {
        T term = lift(c);
        for (int i = 0; i < p.nvars(); ++i)
            for (int e = 0; e < m[i]; ++e) term = term * x[i];
        acc = acc + term;
    }
    return acc;
}

template <class F>
F eval(const Poly<F>& p, const std::vector<F>& x) {
    return eval_with(p, x, [](const F& c) { return c; });
}

inline double eval_double(const QPoly& p, const std::vector<double>& x) {
    return eval_with(p, x, [](const Q& c) { return c.get_d(); });
}
inline std::complex<double> eval_cdouble(const CPoly& p, const std::vector<double>& x) {
    std::vector<std::complex<double>> z(x.begin(), x.end());
    return eval_with(p, z, [](const CQ& c) { return to_cdouble(c); });
}

// Substitute x_i -> images[i] (each a polynomial in `out_nv` variables).
template <class F>
Poly<F> compose(const Poly<F>& p, const std::vector<Poly<F>>& images, int out_nv) {
    Poly<F> acc(out_nv);
    std::vector<std::vector<Poly<F>>> powers(p.nvars());
    for (auto& [m, c] : p.terms()) {
        Poly<F> term = Poly<F>::constant(out_nv, c);
        for (int i = 0; i < p.nvars(); ++i) {
            if (m[i] == 0) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(Poly<F>::constant(out_nv, F(1)));
            while (static_cast<int>(pw.size()) <= m[i]) pw.push_back(pw.back() * images[i]);
            term = term * pw[m[i]];
        }
        acc += term;
    }
    return acc;
}

// P(M X) for a square matrix M (row-major), i.e. x_i -> sum_j M[i][j] x_j.
template <class F, class G>
Poly<F> linear_substitute(const Poly<F>& p, const std::vector<std::vector<G>>& M) {
    const int nv = p.nvars();
    std::vector<Poly<F>> images;
    for (int i = 0; i < nv; ++i) {
        Poly<F> li(nv);
        for (int j = 0; j < nv; ++j) li.add_term(unit_mono(j), F(M[i][j]));
        images.push_back(li);
    }
    return compose(p, images, nv);
}

// ---- Minkowski space R^{n,1}: variables X^0..X^n, eta = diag(-1,1,...,1) ----

inline int eta_diag(int mu) { return mu == 0 ? -1 : 1; }

template <class F>
Poly<F> wave_operator(const Poly<F>& p) {
    Poly<F> r(p.nvars());
    for (int mu = 0; mu < p.nvars(); ++mu) {
        auto d2 = derivative(derivative(p, mu), mu);
        if (mu == 0) r -= d2;
        else r += d2;
    }
    return r;
}

// X^mu X_mu in nv = n+1 variables.
template <class F>
Poly<F> minkowski_square(int nv) {
    Poly<F> r(nv);
    for (int mu = 0; mu < nv; ++mu) {
        Mono m{};
        m[mu] = 2;
        r.add_term(m, F(Q(eta_diag(mu))));
    }
    return r;
}

// Reduce modulo 1 + X^mu X_mu: (X^0)^2 -> 1 + sum_i (X^i)^2 until deg_{X^0} <= 1.
template <class F>
Poly<F> hyperboloid_normal_form(const Poly<F>& p) {
    const int nv = p.nvars();
    Poly<F> done(nv);
    std::map<Mono, F> work(p.terms().begin(), p.terms().end());
    while (!work.empty()) {
        auto it = work.begin();
        Mono m = it->first;
        F c = it->second;
        work.erase(it);
        if (m[0] < 2) {
            done.add_term(m, c);
            continue;
        }
        Mono base = m;
        base[0] -= 2;
        auto push = [&](const Mono& mm, const F& cc) {
            auto [jt, ins] = work.try_emplace(mm, cc);
            if (!ins) {
                jt->second += cc;
                if (is_zero(jt->second)) work.erase(jt);
            }
        };
        push(base, c);
        for (int i = 1; i < nv; ++i) {
            Mono mm = base;
            mm[i] += 2;
            push(mm, c);
        }
    }
    return done;
}

template <class F>
bool vanishes_on_hyperboloid(const Poly<F>& p) {
    return hyperboloid_normal_form(p).is_zero();
}

// P(1, x^1, ..., x^n) as a polynomial in n Euclidean variables.
template <class F>
Poly<F> dehomogenize_at_time_one(const Poly<F>& p) {
    const int n = p.nvars() - 1;
    Poly<F> r(n);
    for (auto& [m, c] : p.terms()) {
        Mono e{};
        for (int i = 0; i < n; ++i) e[i] = m[i + 1];
        r.add_term(e, c);
    }
    return r;
}

// Ambient Euclidean variable x^i inside n Euclidean variables (0-based storage).
template <class F>
Poly<F> evar(int n, int i) {
    return Poly<F>::var(n, i);
}

template <class F>
Poly<F> euclid_square(int n) {
    Poly<F> r(n);
    for (int i = 0; i < n; ++i) {
        Mono m{};
        m[i] = 2;
        r.add_term(m, F(1));
    }
    return r;
}

// ---- Unit sphere S^{n-1}: integrals relative to Vol(S^{n-1}) ----

inline Q sphere_monomial_integral(const std::vector<int>& alpha) {
    const int n = static_cast<int>(alpha.size());
    if (n == 0) throw std::invalid_argument("sphere dimension");
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("negative exponent");
        if (a % 2) return Q(0);
    }
    // prod (a_i - 1)!! / (n (n+2) ... (n + |a| - 2))
    mpz_class num = 1, den = 1;
    int total = 0;
    for (int a : alpha) {
        for (int k = a - 1; k > 0; k -= 2) num *= k;
        total += a;
    }
    for (int k = n; k <= n + total - 2; k += 2) den *= k;
    Q r(num, den);
    r.canonicalize();
    return r;
}

template <class F>
F sphere_integral(const Poly<F>& p) {
    F acc(0);
    std::vector<int> a(p.nvars());
    for (auto& [m, c] : p.terms()) {
        bool odd = false;
        for (int i = 0; i < p.nvars(); ++i) {
            a[i] = m[i];
            odd |= (m[i] & 1);
        }
        if (odd) continue;
        acc += c * F(sphere_monomial_integral(a));
    }
    return acc;
}

// Reduce modulo |x|^2 - 1: (x^1)^2 -> 1 - sum_{i>1} (x^i)^2 until deg_{x^1} <= 1.
// The remainder is unique, so P vanishes on the sphere iff it reduces to 0.
template <class F>
Poly<F> sphere_normal_form(const Poly<F>& p) {
    const int nv = p.nvars();
    Poly<F> done(nv);
    std::map<Mono, F> work(p.terms().begin(), p.terms().end());
    auto push = [&](const Mono& mm, const F& cc) {
        auto [jt, ins] = work.try_emplace(mm, cc);
        if (!ins) {
            jt->second += cc;
            if (is_zero(jt->second)) work.erase(jt);
        }
    };
    while (!work.empty()) {
        auto it = std::prev(work.end());
        Mono m = it->first;
        F c = it->second;
        work.erase(it);
        if (m[0] < 2) {
            done.add_term(m, c);
            continue;
        }
        Mono base = m;
        base[0] -= 2;
        push(base, c);
        for (int i = 1; i < nv; ++i) {
            Mono mm = base;
            mm[i] += 2;
            push(mm, -c);
        }
    }
    return done;
}

template <class F>
bool vanishes_on_sphere(const Poly<F>& p) {
    return sphere_normal_form(p).is_zero();
}

inline std::string to_string(const Mono& m, int nv, const char* var = "X") {
    std::string s;
    for (int i = 0; i < nv; ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += "*";
        s += std::string(var) + std::to_string(i);
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

template <class F>
std::string to_string(const Poly<F>& p, const char* var = "X") {
    if (p.is_zero()) return "0";
    std::string s;
    for (auto& [m, c] : p.terms()) {
        if (!s.empty()) s += " + ";
        s += "(" + to_string(c) + ")*" + to_string(m, p.nvars(), var);
    }
    return s;
}

}  // namespace ahmass
