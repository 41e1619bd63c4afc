#pragma once
// Exact scalar fields: big rationals (GMP) and Gaussian rationals a + bi.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ahmass {

using Q = mpq_class;

inline Q make_q(long num, long den = 1) {
    Q q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Q& q) {
    std::string s = q.get_num().get_str();
    if (q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

// Accepts "a", "a/b", "-a/b".
inline Q parse_q(const std::string& s) {
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

struct CQ {
    Q re, im;
    CQ() = default;
    CQ(const Q& r) : re(r) {}
    CQ(const Q& r, const Q& i) : re(r), im(i) {}
    CQ(long r) : re(r) {}

    CQ& operator+=(const CQ& o) { re += o.re; im += o.im; return *this; }
    CQ& operator-=(const CQ& o) { re -= o.re; im -= o.im; return *this; }
    CQ& operator*=(const CQ& o) {
        Q r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    CQ& operator/=(const CQ& o) {
        Q d = o.re * o.re + o.im * o.im;
        if (d == 0) throw std::domain_error("CQ division by zero");
        Q r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = r;
        return *this;
    }
    friend CQ operator+(CQ a, const CQ& b) { return a += b; }
    friend CQ operator-(CQ a, const CQ& b) { return a -= b; }
    friend CQ operator*(CQ a, const CQ& b) { return a *= b; }
    friend CQ operator/(CQ a, const CQ& b) { return a /= b; }
    friend CQ operator-(const CQ& a) { return CQ(-a.re, -a.im); }
    friend bool operator==(const CQ& a, const CQ& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CQ& a, const CQ& b) { return !(a == b); }
};

inline const CQ I_unit{Q(0), Q(1)};

inline std::ostream& operator<<(std::ostream& os, const CQ& z) {
    return os << to_string(z.re) << (z.im < 0 ? "-" : "+") << to_string(abs(z.im)) << "i";
}

inline std::string to_string(const CQ& z) {
    if (z.im == 0) return to_string(z.re);
    std::string s = z.re == 0 ? "" : to_string(z.re);
    if (z.im > 0 && !s.empty()) s += "+";
    if (z.im < 0) s += "-";
    Q a = abs(z.im);
    if (a != 1) s += to_string(a) + "*";
    return s + "i";
}

// Uniform helpers so templates can treat Q and CQ alike.
inline bool is_zero(const Q& q) { return sgn(q) == 0; }
inline bool is_zero(const CQ& z) { return sgn(z.re) == 0 && sgn(z.im) == 0; }
inline Q conj(const Q& q) { return q; }
inline CQ conj(const CQ& z) { return CQ(z.re, -z.im); }
inline Q real_part(const Q& q) { return q; }
inline Q real_part(const CQ& z) { return z.re; }
inline Q imag_part(const Q&) { return Q(0); }
inline Q imag_part(const CQ& z) { return z.im; }
inline double to_double(const Q& q) { return q.get_d(); }
inline std::complex<double> to_cdouble(const Q& q) { return {q.get_d(), 0.0}; }
inline std::complex<double> to_cdouble(const CQ& z) { return {z.re.get_d(), z.im.get_d()}; }

template <class F> inline F from_q(const Q& q) { return F(q); }

template <class F> struct is_complex_field : std::false_type {};
template <> struct is_complex_field<CQ> : std::true_type {};

inline Q factorial_q(int k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return Q(f);
}

inline Q binomial_q(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Q(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Q(b);
}

}  // namespace ahmass
