#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltwist/errors.hpp"
#include "ltwist/series.hpp"

#include <random>

using namespace ltwist;

namespace {

mp_complex to_mp(const QComplex& z) {
    return {mp_real(z.re.convert_to<mp_real>()), mp_real(z.im.convert_to<mp_real>())};
}

// D/log^2 p over one Euler factor, as a formal power series in p^{-s}:
// L'' - L'^2 / L with L = sum lambda(p^m) x^m, trivial character.
std::vector<QComplex> euler_factor_oracle(const QComplex& lp, unsigned depth) {
    std::vector<QComplex> l(depth + 1);
    l[0] = QComplex(1);
    if (depth >= 1) l[1] = lp;
    for (unsigned m = 2; m <= depth; ++m) l[m] = lp * l[m - 1] - l[m - 2];
    std::vector<QComplex> P(depth + 1), Q(depth + 1), d(depth + 1);
    for (unsigned m = 0; m <= depth; ++m)
        for (unsigned j = 0; j <= m; ++j) P[m] += QComplex(mpq(j * (m - j))) * l[j] * l[m - j];
    for (unsigned m = 0; m <= depth; ++m) {
        Q[m] = P[m];
        for (unsigned i = 1; i <= m; ++i) Q[m] -= l[i] * Q[m - i];
        d[m] = QComplex(mpq(m * m)) * l[m] - Q[m];
    }
    return d;
}

bool near(const mp_complex& a, const mp_complex& b, const char* tol) {
    return abs(a - b) <= mp_real(tol) * mp_max(mp_real(1), abs(b));
}

}  // namespace

TEST_CASE("c coefficients against the single Euler factor oracle") {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx);
    MaassForm f = parse_form_file(LTWIST_FIXTURE);
    const std::int64_t X = std::min<std::int64_t>(f.coeff_bound, 20000);
    auto c = c_coeffs(f, X);
    CHECK(c.kind == CoeffKind::C);
    CHECK(abs(c.values[1]) == 0);
    int checked = 0;
    for (std::int64_t p : primes_up_to(50)) {
        auto d = euler_factor_oracle(exact_lambda_p(f, p), 6);
        mp_real l2 = pow(log(mp_real(p)), 2);
        CHECK(abs(to_mp(d[0])) == 0);
        std::int64_t pm = p;
        for (unsigned m = 1; m <= 6 && pm <= X; ++m, pm *= p) {
            CHECK(near(c.values[pm], to_mp(d[m]) * l2, "1e-30"));
            ++checked;
        }
    }
    CHECK(checked >= 30);

    const mp_complex l2c = f.lambda_p(2), one(mp_real(1));
    const mp_real lg = log(mp_real(2));
    CHECK(near(c.values[2], l2c * lg * lg, "1e-32"));
    CHECK(near(c.values[4], (l2c * l2c - mp_real(2)) * (2 * lg * lg) + l2c * l2c * lg * lg, "1e-32"));
    CHECK_THROWS_AS(c_coeffs(f, f.coeff_bound + 1000), MissingPrimeError);
}

TEST_CASE("eval_series truncation and tail bounds") {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx);
    MaassForm f = parse_form_file(LTWIST_FIXTURE);
    auto small = lambda_coeffs(f, 1000), large = lambda_coeffs(f, 2000);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> re(3.0, 5.0), im(-20.0, 20.0);
    std::uniform_int_distribution<int> qd(2, 40), jd(0, 7), on(0, 2);
    for (int i = 0; i < 20; ++i) {
        mp_complex s(mp_real(re(rng)), mp_real(im(rng)));
        std::optional<TwistSpec> tw;
        if (on(rng)) tw = TwistSpec{mpq(1 + qd(rng) % 7, qd(rng)), static_cast<unsigned>(jd(rng))};
        auto a = evaluate_truncated(small, s, tw);
        auto b = evaluate_truncated(large, s, tw);
        CHECK(abs(a.value - b.value) <= a.tail_bound);
        CHECK(b.tail_bound < a.tail_bound);
    }
    PrecisionContext strict = ctx;
    strict.tol = 1e-10;
    CHECK_THROWS_AS(eval_series(lambda_coeffs(f, 50), mp_complex(mp_real(3)), std::nullopt, strict), TailError);
    CHECK_THROWS_AS(eval_series(small, mp_complex(mp_real("1.55")), std::nullopt, strict), PreconditionError);
    PrecisionContext loose = ctx;
    loose.tol = 1e-3;
    CHECK_NOTHROW(eval_series(large, mp_complex(mp_real(4)), std::nullopt, loose));
}

TEST_CASE("trig derivatives are 4-periodic") {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx);
    const mpq alpha(3, 7);
    for (unsigned j = 0; j < 4; ++j) {
        TrigTable a(alpha, j), b(alpha, j + 4);
        for (std::int64_t n = -3; n <= 30; ++n) CHECK(a(n) == b(n));
    }
    TrigTable c(alpha, 0), s(alpha, 1);
    for (std::int64_t n = 1; n <= 14; ++n) {
        mp_real th = 2 * pi() * 3 * n / 7;
        CHECK(abs(c(n) - cos(th)) < mp_real("1e-35"));
        CHECK(abs(s(n) + sin(th)) < mp_real("1e-35"));
    }
    CHECK_THROWS_AS(TrigTable(mpq(0), 0), PreconditionError);
}

TEST_CASE("cosine twist decomposes into character twists") {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx);
    MaassForm f = parse_form_file(LTWIST_FIXTURE);
    for (std::int64_t q : {3, 5, 7}) {
        for (const mp_complex& s : {mp_complex(mp_real("2.5")), mp_complex(mp_real(3)), mp_complex(mp_real(3), mp_real(5))}) {
            auto r = twist_decomposition(f, q, s, 2000);
            CHECK(r.residual <= mp_real("1e-8"));
            CHECK(r.residual <= r.tail_bound);
        }
    }
    CHECK_THROWS_AS(twist_decomposition(f, 5, mp_complex(mp_real("1.4")), 100), PreconditionError);
}

TEST_CASE("principal twist") {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx);
    MaassForm f = parse_form_file(LTWIST_FIXTURE);
    REQUIRE(abs(f.lambda_p(5)) < 2);
    auto r = principal_twist(f, 5, 2000);
    CHECK(r.exact);
    CHECK(r.checked == 2000);
    CHECK(abs(r.spacing - 2 * pi() / log(mp_real(5))) < mp_real("1e-35"));
    // unimodular Satake parameters put the poles on Re s = 0
    for (int i = 0; i < 2; ++i) {
        CHECK(abs(r.sigma[i]) < mp_real("1e-30"));
        CHECK(abs(abs(r.roots[i]) - 1) < mp_real("1e-30"));
        mp_complex s0 = r.pole(i, 0, 5), s1 = r.pole(i, 1, 5);
        CHECK(abs(abs(s1 - s0) - r.spacing) < mp_real("1e-30"));
        // 1 - lambda q^{-s} + q^{-2s} vanishes at each pole
        mp_complex x = std::exp(-s1 * log(mp_real(5)));
        CHECK(abs(mp_complex(mp_real(1)) - f.lambda_p(5) * x + x * x) < mp_real("1e-30"));
    }
    CHECK_THROWS_AS(principal_twist(f, 9, 100), NotPrimeError);
}

TEST_CASE("Rankin-Selberg average") {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx);
    MaassForm f = parse_form_file(LTWIST_FIXTURE);
    auto r2 = rs_average(f, 2);
    CHECK(r2.prime_count == 1);
    CHECK(abs(r2.average - norm(f.lambda_p(2))) < mp_real("1e-35"));
    CHECK(r2.first_small == 2);
    auto r = rs_average(f, 10000);
    CHECK(r.prime_count == 1229);
    CHECK(r.average >= mp_real("0.75"));
    CHECK(r.average <= mp_real("1.25"));
    CHECK(r.min_abs < 2);
    CHECK(abs(abs(f.lambda_p(r.min_prime)) - r.min_abs) == 0);
    CHECK_THROWS_AS(rs_average(f, 1), PreconditionError);
}

TEST_CASE("vandermonde coefficients") {
    CHECK(vandermonde_coeffs({7}, 0) == std::vector<mpq>{mpq(1)});
    CHECK(vandermonde_coeffs({2, 3}, 0) == std::vector<mpq>{mpq(-2), mpq(3)});
    std::mt19937 rng(5);
    auto primes = primes_up_to(200);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(primes.begin(), primes.end(), rng);
        std::vector<std::int64_t> q(primes.begin(), primes.begin() + 4);
        for (unsigned m0 = 0; m0 < 4; ++m0) {
            auto c = vandermonde_coeffs(q, m0);
            REQUIRE(c.size() == 4);
            for (unsigned m = 0; m < 4; ++m) {
                mpq acc = 0;
                for (int j = 0; j < 4; ++j) {
                    mpq qm = 1;
                    for (unsigned e = 0; e < m; ++e) qm *= q[j];
                    acc += c[j] / qm;
                }
                CHECK(acc == mpq(m == m0 ? 1 : 0));
            }
        }
    }
}
