#pragma once

#include "ltwist/forms.hpp"
#include "ltwist/rational.hpp"

#include <optional>

namespace ltwist {

// Exponent in the Kim-Sarnak bound.
inline constexpr double kTheta = 7.0 / 64.0;

enum class CoeffKind { Lambda, C, A };

struct CoeffTable {
    CoeffKind kind = CoeffKind::Lambda;
    std::vector<mp_complex> values;  // index n, values[0] unused
    std::int64_t size() const { return static_cast<std::int64_t>(values.size()) - 1; }
};

CoeffTable lambda_coeffs(const MaassForm& f, std::int64_t X);
// Lambda(n) a_n, the coefficients of -L'/L.
CoeffTable a_coeffs(const MaassForm& f, std::int64_t X);
// Coefficients of D = L (log L)''.
CoeffTable c_coeffs(const MaassForm& f, std::int64_t X);

struct TwistSpec {
    mpq alpha = 1;
    unsigned deriv = 0;  // j-th derivative of cos
};

// cos^{(j)}(2 pi n alpha) with exact reduction of n alpha mod 1.
class TrigTable {
public:
    TrigTable(const mpq& alpha, unsigned deriv);
    mp_real operator()(std::int64_t n) const;

private:
    std::int64_t num_ = 0, den_ = 1;
    unsigned deriv_ = 0;
    std::vector<mp_real> cos_, sin_;
};

struct SeriesValue {
    mp_complex value;
    mp_real tail_bound;
};

// Sum_{n <= X} coeff(n) cos^{(j)}(2 pi n alpha) n^{-s}; tail bound from Kim-Sarnak.
SeriesValue evaluate_truncated(const CoeffTable& t, const mp_complex& s, const std::optional<TwistSpec>& twist);
// As above, but throws TailError when the bound exceeds ctx.tol.
SeriesValue eval_series(const CoeffTable& t, const mp_complex& s, const std::optional<TwistSpec>& twist,
                        const PrecisionContext& ctx);
mp_real tail_bound(CoeffKind kind, std::int64_t X, const mp_real& sigma);

struct TwistDecomposition {
    mp_complex lhs, rhs;
    mp_real residual;
    mp_real tail_bound;  // combined tails of both sides
};

// D(s, 1/q, cos) against D(s) - q/(q-1) D(s, chi0) + sqrt(q)/(q-1) sum conj(eps) D(s, chi).
TwistDecomposition twist_decomposition(const MaassForm& f, std::int64_t q, const mp_complex& s, std::int64_t X);

struct PrincipalTwistReport {
    std::int64_t checked = 0;
    bool exact = true;            // every coefficient identity held exactly
    std::int64_t first_failure = 0;
    // Euler polynomial roots X_i of 1 - lambda X + xi X^2; poles at q^{-s} = X_i
    mp_complex roots[2];
    mp_real sigma[2], theta[2];
    mp_real spacing;  // 2 pi / log q
    // s_m = sigma - i (theta + 2 pi m)/log q
    mp_complex pole(int root, std::int64_t m, std::int64_t q) const;
};

PrincipalTwistReport principal_twist(const MaassForm& f, std::int64_t q, std::int64_t X);

struct RsReport {
    mp_real average;
    std::int64_t prime_count = 0;
    mp_real min_abs;
    std::int64_t min_prime = 0;
    std::int64_t first_small = 0;  // first q not dividing N with |lambda(q)| < 2, 0 if none
};

RsReport rs_average(const MaassForm& f, std::int64_t x);

}  // namespace ltwist
