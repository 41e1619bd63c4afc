#pragma once
// Shared helpers for the test binaries: seeded random rationals and polynomials.

#include "ahmass/poly.hpp"

#include <random>
#include <vector>

namespace ahmass::testing {

inline std::mt19937& rng() {
    static std::mt19937 g(20240611u);
    return g;
}

inline Q rand_q(int lo = -5, int hi = 5, int maxden = 4) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, maxden);
    Q q(num(rng()), den(rng()));
    q.canonicalize();
    return q;
}

inline CQ rand_cq() { return CQ(rand_q(), rand_q()); }

template <class F>
F rand_field() {
    if constexpr (std::is_same_v<F, CQ>) return rand_cq();
    else return rand_q();
}

// Random polynomial with homogeneous terms of degree d (dense over monomials, some zeros).
template <class F = Q>
Poly<F> rand_homogeneous(int nv, int d) {
    Poly<F> p(nv);
    for (auto& m : monomials_of_degree(nv, d)) p.add_term(m, rand_field<F>());
    return p;
}

template <class F = Q>
Poly<F> rand_poly(int nv, int maxdeg) {
    Poly<F> p(nv);
    for (int d = 0; d <= maxdeg; ++d) p += rand_homogeneous<F>(nv, d);
    return p;
}

}  // namespace ahmass::testing
