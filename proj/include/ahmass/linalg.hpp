#pragma once
// Exact sparse linear algebra: incremental reduced row echelon form, kernels,
// particular solutions (free variables set to zero), and Sylvester signatures.

#include "ahmass/field.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace ahmass {

template <class F>
using SparseVec = std::vector<std::pair<int, F>>;  // sorted by index, no zeros

template <class F>
using Mat = std::vector<std::vector<F>>;

template <class F>
SparseVec<F> to_sparse(const std::map<int, F>& m) {
    SparseVec<F> v;
    v.reserve(m.size());
    for (auto& [i, c] : m)
        if (!is_zero(c)) v.emplace_back(i, c);
    return v;
}

template <class F>
SparseVec<F> to_sparse(const std::vector<F>& d) {
    SparseVec<F> v;
    for (int i = 0; i < static_cast<int>(d.size()); ++i)
        if (!is_zero(d[i])) v.emplace_back(i, d[i]);
    return v;
}

template <class F>
std::vector<F> to_dense(const SparseVec<F>& v, int n) {
    std::vector<F> d(n, F(0));
    for (auto& [i, c] : v) d.at(i) = c;
    return d;
}

template <class F>
const F* sparse_find(const SparseVec<F>& v, int col) {
    auto it = std::lower_bound(v.begin(), v.end(), col,
                               [](const std::pair<int, F>& e, int c) { return e.first < c; });
    return (it != v.end() && it->first == col) ? &it->second : nullptr;
}

// Rows are kept fully reduced: every pivot column is zero outside its own row.
// Each pivot is the smallest column index of its row, so a block-diagonal
// system (up to permutation) stays block-diagonal throughout.
template <class F>
class Echelon {
public:
    explicit Echelon(int ncols) : ncols_(ncols) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<SparseVec<F>>& rows() const { return rows_; }
    const std::map<int, int>& pivots() const { return pivot_row_; }

    // Returns the reduced remainder of v (empty iff v lies in the row space).
    std::map<int, F> reduce(const SparseVec<F>& v) const {
        std::map<int, F> w;
        for (auto& [i, c] : v) {
            if (i < 0 || i >= ncols_) throw std::out_of_range("column index");
            if (!is_zero(c)) w[i] += c;
        }
        auto it = w.begin();
        while (it != w.end()) {
            if (is_zero(it->second)) {
                it = w.erase(it);
                continue;
            }
            auto pr = pivot_row_.find(it->first);
            if (pr == pivot_row_.end()) {
                ++it;
                continue;
            }
            const int col = it->first;
            F f = it->second;
            for (auto& [j, c] : rows_[pr->second]) {
                auto [jt, ins] = w.try_emplace(j, -(f * c));
                if (!ins) jt->second -= f * c;
            }
            w.erase(col);
            it = w.upper_bound(col);
        }
        for (auto jt = w.begin(); jt != w.end();) {
            if (is_zero(jt->second)) jt = w.erase(jt);
            else ++jt;
        }
        return w;
    }

    bool add(const SparseVec<F>& v) {
        auto w = reduce(v);
        if (w.empty()) return false;
        const int lead = w.begin()->first;
        F inv = F(1) / w.begin()->second;
        SparseVec<F> row;
        row.reserve(w.size());
        for (auto& [j, c] : w) row.emplace_back(j, c * inv);
        // Clear the new pivot column from earlier rows.
        for (auto& r : rows_) {
            const F* e = sparse_find(r, lead);
            if (!e) continue;
            F f = *e;
            std::map<int, F> acc(r.begin(), r.end());
            for (auto& [j, c] : row) acc[j] -= f * c;
            r = to_sparse(acc);
        }
        pivot_row_[lead] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(row));
        return true;
    }

    std::vector<int> free_columns() const {
        std::vector<int> f;
        for (int c = 0; c < ncols_; ++c)
            if (!pivot_row_.count(c)) f.push_back(c);
        return f;
    }

    // Basis of the right kernel: one vector per free column.
    std::vector<SparseVec<F>> kernel() const {
        std::map<int, std::vector<std::pair<int, F>>> by_free;  // free col -> (pivot col, entry)
        for (auto& [pc, ri] : pivot_row_)
            for (auto& [j, c] : rows_[ri])
                if (j != pc) by_free[j].emplace_back(pc, c);
        std::vector<SparseVec<F>> out;
        for (int f : free_columns()) {
            std::map<int, F> v;
            v[f] = F(1);
            auto it = by_free.find(f);
            if (it != by_free.end())
                for (auto& [pc, c] : it->second) v[pc] = -c;
            out.push_back(to_sparse(v));
        }
        return out;
    }

private:
    int ncols_;
    std::vector<SparseVec<F>> rows_;
    std::map<int, int> pivot_row_;
};

template <class F>
std::vector<SparseVec<F>> nullspace(const std::vector<SparseVec<F>>& rows, int ncols) {
    Echelon<F> e(ncols);
    for (auto& r : rows) e.add(r);
    return e.kernel();
}

template <class F>
std::vector<std::vector<F>> nullspace(const Mat<F>& M) {
    const int cols = M.empty() ? 0 : static_cast<int>(M[0].size());
    std::vector<SparseVec<F>> rows;
    for (auto& r : M) {
        if (static_cast<int>(r.size()) != cols) throw std::invalid_argument("ragged matrix");
        rows.push_back(to_sparse(r));
    }
    std::vector<std::vector<F>> out;
    for (auto& v : nullspace(rows, cols)) out.push_back(to_dense(v, cols));
    return out;
}

template <class F>
int rank(const std::vector<SparseVec<F>>& rows, int ncols) {
    Echelon<F> e(ncols);
    for (auto& r : rows) e.add(r);
    return e.rank();
}

// Solve A x = b. Returns nullopt if inconsistent; free variables are zero.
template <class F>
std::optional<SparseVec<F>> solve(const std::vector<SparseVec<F>>& rows, const std::vector<F>& rhs,
                                  int ncols) {
    if (rows.size() != rhs.size()) throw std::invalid_argument("rhs size");
    Echelon<F> e(ncols + 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        SparseVec<F> r = rows[i];
        if (!is_zero(rhs[i])) r.emplace_back(ncols, rhs[i]);
        e.add(r);
    }
    if (e.pivots().count(ncols)) return std::nullopt;
    std::map<int, F> x;
    for (auto& [pc, ri] : e.pivots()) {
        const F* b = sparse_find(e.rows()[ri], ncols);
        if (b) x[pc] = *b;
    }
    return to_sparse(x);
}

struct Signature {
    int plus = 0, minus = 0, zero = 0;
    friend bool operator==(const Signature& a, const Signature& b) {
        return a.plus == b.plus && a.minus == b.minus && a.zero == b.zero;
    }
};

// Congruence diagonalization with rational pivots (Sylvester's law of inertia).
inline Signature signature_of_form(Mat<Q> A) {
    const int n = static_cast<int>(A.size());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(A[i].size()) != n) throw std::invalid_argument("form not square");
        for (int j = 0; j < i; ++j)
            if (A[i][j] != A[j][i]) throw std::invalid_argument("form not symmetric");
    }
    Signature s;
    std::vector<int> active(n);
    for (int i = 0; i < n; ++i) active[i] = i;
    while (!active.empty()) {
        int piv = -1;
        for (int i : active)
            if (sgn(A[i][i]) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) {
            int pi = -1, pj = -1;
            for (std::size_t a = 0; a < active.size() && pi < 0; ++a)
                for (std::size_t b = a + 1; b < active.size(); ++b)
                    if (sgn(A[active[a]][active[b]]) != 0) {
                        pi = active[a];
                        pj = active[b];
                        break;
                    }
            if (pi < 0) {
                s.zero += static_cast<int>(active.size());
                break;
            }
            // Replace e_i by e_i + e_j; the new diagonal entry is 2 A_ij != 0.
            for (int k : active) A[pi][k] += A[pj][k];
            for (int k : active) A[k][pi] += A[k][pj];
            piv = pi;
        }
        const Q d = A[piv][piv];
        (sgn(d) > 0 ? s.plus : s.minus)++;
        active.erase(std::find(active.begin(), active.end(), piv));
        for (int j : active) {
            if (sgn(A[j][piv]) == 0) continue;
            Q f = A[j][piv] / d;
            for (int k : active) A[j][k] -= f * A[piv][k];
        }
        for (int j : active) A[piv][j] = 0, A[j][piv] = 0;
    }
    return s;
}

template <class F>
Mat<F> identity_matrix(int n) {
    Mat<F> m(n, std::vector<F>(n, F(0)));
    for (int i = 0; i < n; ++i) m[i][i] = F(1);
    return m;
}

template <class F>
Mat<F> matmul(const Mat<F>& a, const Mat<F>& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat<F> c(n, std::vector<F>(m, F(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (is_zero(a[i][l])) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

template <class F>
Mat<F> transpose(const Mat<F>& a) {
    if (a.empty()) return a;
    Mat<F> t(a[0].size(), std::vector<F>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

template <class F>
Mat<F> mat_add(Mat<F> a, const Mat<F>& b, const F& s = F(1)) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += s * b[i][j];
    return a;
}

template <class G, class F>
Mat<G> mat_cast(const Mat<F>& a) {
    Mat<G> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (auto& x : a[i]) r[i].push_back(G(x));
    return r;
}

// Inverse by Gauss-Jordan; throws on singular input.
template <class F>
Mat<F> inverse(Mat<F> a) {
    const int n = static_cast<int>(a.size());
    Mat<F> inv = identity_matrix<F>(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && is_zero(a[p][c])) ++p;
        if (p == n) throw std::domain_error("singular matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        F f = F(1) / a[c][c];
        for (int j = 0; j < n; ++j) a[c][j] *= f, inv[c][j] *= f;
        for (int r = 0; r < n; ++r) {
            if (r == c || is_zero(a[r][c])) continue;
            F g = a[r][c];
            for (int j = 0; j < n; ++j) a[r][j] -= g * a[c][j], inv[r][j] -= g * inv[c][j];
        }
    }
    return inv;
}

}  // namespace ahmass
