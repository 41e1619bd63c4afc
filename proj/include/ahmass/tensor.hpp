#pragma once
// Dense covariant tensors on R^{n,1} (or R^n) with polynomial components.

#include "ahmass/linalg.hpp"
#include "ahmass/poly.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace ahmass {

template <class F>
class PolyTensor {
public:
    PolyTensor() = default;
    PolyTensor(int dim, int rank, int nvars) : dim_(dim), rank_(rank), nv_(nvars) {
        int sz = 1;
        for (int i = 0; i < rank; ++i) sz *= dim;
        c_.assign(sz, Poly<F>(nvars));
    }

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    int nvars() const { return nv_; }
    std::size_t size() const { return c_.size(); }

    int flat(const std::vector<int>& idx) const {
        int f = 0;
        for (int i : idx) f = f * dim_ + i;
        return f;
    }
    std::vector<int> unflat(int f) const {
        std::vector<int> idx(rank_);
        for (int i = rank_ - 1; i >= 0; --i) {
            idx[i] = f % dim_;
            f /= dim_;
        }
        return idx;
    }

    Poly<F>& operator[](int f) { return c_[f]; }
    const Poly<F>& operator[](int f) const { return c_[f]; }
    Poly<F>& at(const std::vector<int>& idx) { return c_[flat(idx)]; }
    const Poly<F>& at(const std::vector<int>& idx) const { return c_[flat(idx)]; }
    Poly<F>& operator()(int a, int b) { return c_[a * dim_ + b]; }
    const Poly<F>& operator()(int a, int b) const { return c_[a * dim_ + b]; }
    Poly<F>& operator()(int a, int b, int c) { return c_[(a * dim_ + b) * dim_ + c]; }
    const Poly<F>& operator()(int a, int b, int c) const { return c_[(a * dim_ + b) * dim_ + c]; }
    Poly<F>& operator()(int a, int b, int c, int d) { return c_[((a * dim_ + b) * dim_ + c) * dim_ + d]; }
    const Poly<F>& operator()(int a, int b, int c, int d) const {
        return c_[((a * dim_ + b) * dim_ + c) * dim_ + d];
    }

    bool is_zero() const {
        for (auto& p : c_)
            if (!p.is_zero()) return false;
        return true;
    }

    PolyTensor& operator+=(const PolyTensor& o) {
        same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    PolyTensor& operator-=(const PolyTensor& o) {
        same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    PolyTensor& operator*=(const F& s) {
        for (auto& p : c_) p *= s;
        return *this;
    }
    friend PolyTensor operator+(PolyTensor a, const PolyTensor& b) { return a += b; }
    friend PolyTensor operator-(PolyTensor a, const PolyTensor& b) { return a -= b; }
    friend PolyTensor operator*(PolyTensor a, const F& s) { return a *= s; }
    friend PolyTensor operator*(const F& s, PolyTensor a) { return a *= s; }
    friend bool operator==(const PolyTensor& a, const PolyTensor& b) { return a.c_ == b.c_; }

    PolyTensor map(const std::function<Poly<F>(const Poly<F>&)>& f) const {
        PolyTensor r = *this;
        for (auto& p : r.c_) p = f(p);
        return r;
    }

    template <class G>
    PolyTensor<G> cast() const {
        PolyTensor<G> r(dim_, rank_, nv_);
        for (std::size_t i = 0; i < c_.size(); ++i) r[static_cast<int>(i)] = c_[i].template cast<G>();
        return r;
    }

private:
    void same(const PolyTensor& o) const {
        if (dim_ != o.dim_ || rank_ != o.rank_) throw std::invalid_argument("tensor shape mismatch");
    }
    int dim_ = 0, rank_ = 0, nv_ = 0;
    std::vector<Poly<F>> c_;
};

using QTensor = PolyTensor<Q>;
using CTensor = PolyTensor<CQ>;

template <class F>
PolyTensor<F> scale(const PolyTensor<F>& t, const Poly<F>& f) {
    return t.map([&](const Poly<F>& p) { return p * f; });
}

// (dT)_{lambda, mu...} = d_lambda T_{mu...}
template <class F>
PolyTensor<F> gradient(const PolyTensor<F>& t) {
    PolyTensor<F> g(t.dim(), t.rank() + 1, t.nvars());
    const int stride = static_cast<int>(t.size());
    for (int l = 0; l < t.dim(); ++l)
        for (int f = 0; f < stride; ++f) g[l * stride + f] = derivative(t[f], l);
    return g;
}

template <class F>
bool is_symmetric2(const PolyTensor<F>& h) {
    for (int a = 0; a < h.dim(); ++a)
        for (int b = a + 1; b < h.dim(); ++b)
            if (h(a, b) != h(b, a)) return false;
    return true;
}

// Flatten a tensor into (component, monomial) keyed coefficients.
template <class F>
void flatten_into(const PolyTensor<F>& t, std::map<std::pair<int, Mono>, F>& out, const F& s = F(1)) {
    for (int f = 0; f < static_cast<int>(t.size()); ++f)
        for (auto& [m, c] : t[f].terms()) {
            auto [it, ins] = out.try_emplace({f, m}, s * c);
            if (!ins) it->second += s * c;
        }
}

template <class F>
void flatten_into(const Poly<F>& p, std::map<std::pair<int, Mono>, F>& out, const F& s = F(1)) {
    for (auto& [m, c] : p.terms()) {
        auto [it, ins] = out.try_emplace({0, m}, s * c);
        if (!ins) it->second += s * c;
    }
}

template <class F>
PolyTensor<F> hyperboloid_normal_form(const PolyTensor<F>& t) {
    return t.map([](const Poly<F>& p) { return hyperboloid_normal_form(p); });
}

template <class F>
bool vanishes_on_hyperboloid(const PolyTensor<F>& t) {
    for (int f = 0; f < static_cast<int>(t.size()); ++f)
        if (!hyperboloid_normal_form(t[f]).is_zero()) return false;
    return true;
}

}  // namespace ahmass
