#include "ltwist/rational.hpp"

#include "ltwist/errors.hpp"

#include <Eigen/Dense>

#include <mutex>
#include <set>

namespace Eigen {
template <>
struct NumTraits<ltwist::mpq> : GenericNumTraits<ltwist::mpq> {
    typedef ltwist::mpq Real;
    typedef ltwist::mpq NonInteger;
    typedef ltwist::mpq Nested;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace ltwist {

mpq parse_rational(const std::string& text) {
    std::string s = text;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpq num = parse_rational(s.substr(0, slash));
        mpq den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw PreconditionError("zero denominator: " + text);
        return num / den;
    }
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        exp10 = std::stol(s.substr(e + 1));
        s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    auto dot = s.find('.');
    std::string digits = s;
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw PreconditionError("not a decimal: " + text);
    // mpz reads a leading 0 as octal
    size_t nz = digits.find_first_not_of('0');
    mpz n(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    mpz p = boost::multiprecision::pow(mpz(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
    mpq r = exp10 < 0 ? mpq(n, p) : mpq(n * p);
    return neg ? mpq(-r) : r;
}

mpq factorial(unsigned n) {
    mpz r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return mpq(r);
}

mpq gen_binom(const mpq& x, unsigned l) {
    mpq r = 1;
    for (unsigned i = 0; i < l; ++i) r *= (x - i);
    return r / factorial(l);
}

mpq bernoulli(unsigned n) {
    static std::mutex mu;
    static std::vector<mpq> cache;
    std::lock_guard<std::mutex> lock(mu);
    // Akiyama-Tanigawa, extended on demand.
    while (cache.size() <= n) {
        unsigned m = static_cast<unsigned>(cache.size());
        std::vector<mpq> a(m + 1);
        for (unsigned j = 0; j <= m; ++j) {
            a[j] = mpq(1, j + 1);
            for (unsigned k = j; k >= 1; --k) a[k - 1] = k * (a[k - 1] - a[k]);
        }
        cache.push_back(a[0]);
    }
    mpq b = cache[n];
    // Akiyama-Tanigawa yields B_1 = +1/2.
    if (n == 1) b = -b;
    return b;
}

std::vector<mpq> vandermonde_coeffs(const std::vector<std::int64_t>& q, unsigned m0) {
    const auto M = static_cast<Eigen::Index>(q.size());
    if (M == 0 || m0 >= q.size()) throw PreconditionError("vandermonde: need 0 <= m0 < M");
    if (std::set<std::int64_t>(q.begin(), q.end()).size() != q.size())
        throw PreconditionError("vandermonde: nodes must be distinct");
    using Mat = Eigen::Matrix<mpq, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<mpq, Eigen::Dynamic, 1>;
    Mat A(M, M);
    for (Eigen::Index m = 0; m < M; ++m)
        for (Eigen::Index j = 0; j < M; ++j) {
            mpq p = 1;
            for (Eigen::Index e = 0; e < m; ++e) p /= q[j];
            A(m, j) = p;
        }
    Vec b = Vec::Constant(M, mpq(0));
    b(m0) = 1;
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) throw SingularError("vandermonde matrix singular");
    Vec c = lu.solve(b);
    if (A * c != b) throw SingularError("vandermonde solve not exact");
    return std::vector<mpq>(c.data(), c.data() + M);
}

}  // namespace ltwist
