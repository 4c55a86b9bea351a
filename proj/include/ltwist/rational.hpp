#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ltwist {

using mpq = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using mpz = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

// Gaussian rational a + bi.
struct QComplex {
    mpq re = 0;
    mpq im = 0;

    QComplex() = default;
    QComplex(mpq r, mpq i = 0) : re(std::move(r)), im(std::move(i)) {}

    QComplex& operator+=(const QComplex& o) { re += o.re; im += o.im; return *this; }
    QComplex& operator-=(const QComplex& o) { re -= o.re; im -= o.im; return *this; }
    QComplex& operator*=(const QComplex& o) {
        mpq r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
    friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
    friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
    friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
    friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }
};

// Exact decimal such as "-1.25e-3" or "7/64".
mpq parse_rational(const std::string& text);

// (x choose l) = x(x-1)...(x-l+1)/l!
mpq gen_binom(const mpq& x, unsigned l);
mpq factorial(unsigned n);

// Exact Bernoulli number B_n.
mpq bernoulli(unsigned n);

// Rationals c_j with sum_j c_j q_j^{-m} = [m == m0] for m = 0..M-1.
std::vector<mpq> vandermonde_coeffs(const std::vector<std::int64_t>& q, unsigned m0);

}  // namespace ltwist
