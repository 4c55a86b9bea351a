#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltwist/errors.hpp"
#include "ltwist/series.hpp"
#include "ltwist/zeros.hpp"

#include <random>
#include <sstream>

using namespace ltwist;

namespace {

const PrecisionContext& base_ctx() {
    static const PrecisionContext ctx;
    return ctx;
}

const MaassForm& fixture() {
    static const MaassForm f = [] {
        ScopedPrecision sp(base_ctx());
        return parse_form_file(LTWIST_FIXTURE);
    }();
    return f;
}

const LambdaEvaluator& fixture_ev() {
    static const LambdaEvaluator ev = [] {
        ScopedPrecision sp(base_ctx());
        return LambdaEvaluator(fixture(), base_ctx());
    }();
    return ev;
}

// dual evaluator split away from the fixed point, so both sides of the FE are computed independently
const LambdaEvaluator& fixture_dual_ev() {
    static const LambdaEvaluator ev = [] {
        ScopedPrecision sp(base_ctx());
        return LambdaEvaluator(dual_form(fixture()), base_ctx(), mp_real("0.8"));
    }();
    return ev;
}

const ScanReport& fixture_scan() {
    static const ScanReport r = scan_zeros(fixture_ev(), 0, 14, 0.1);
    return r;
}

mp_complex c(const char* re, const char* im = "0") { return {mp_real(re), mp_real(im)}; }

}  // namespace

TEST_CASE("functional equation at random points") {
    ScopedPrecision sp(base_ctx());
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> re(-1.0, 2.0), im(-15.0, 15.0);
    for (int i = 0; i < 10; ++i) {
        mp_complex s(mp_real(re(rng)), mp_real(im(rng)));
        auto r = fe_residual(fixture_ev(), fixture_dual_ev(), s);
        CHECK(r.residual <= mp_real("1e-7"));
    }
}

TEST_CASE("agrees with the Dirichlet series on Re s = 3") {
    ScopedPrecision sp(base_ctx());
    const auto& f = fixture();
    auto table = lambda_coeffs(f, 5000);
    for (const char* t : {"0", "4", "11"}) {
        mp_complex s = c("3", t);
        auto L = evaluate_truncated(table, s, std::nullopt);
        mp_complex g = gamma_factor(FormParams::of(f), 1, s, base_ctx());
        mp_complex lam = fixture_ev()(s);
        CHECK(abs(lam - g * L.value) / abs(g) <= mp_real("1e-7") + L.tail_bound);
    }
}

TEST_CASE("self-dual symmetry on the critical line") {
    ScopedPrecision sp(base_ctx());
    const auto& ev = fixture_ev();
    // root factor -1: Lambda(1/2 + it) / i is real
    REQUIRE(abs(ev.root_factor() + c("1")) == 0);
    for (const char* t : {"1", "5", "10"}) {
        mp_complex s = c("0.5", t);
        mp_complex v = ev(s) / mp_complex(mp_real(0), mp_real(1));
        CHECK(abs(v.imag()) / ev.unit(s) <= mp_real("1e-8"));
    }
    CHECK(abs(ev(c("0.5"))) / ev.unit(c("0.5")) <= mp_real("1e-20"));
}

TEST_CASE("derivatives") {
    ScopedPrecision sp(base_ctx());
    const auto& ev = fixture_ev();
    const mp_complex s = c("0.6", "3");
    auto d = ev.derivs(s);
    CHECK(d[0] == ev(s, 0));
    CHECK(abs(d[1] - ev(s, 1)) == 0);
    CHECK(abs(lambda_complete(fixture(), s, base_ctx()) - d[0]) <= mp_real("1e-30") * ev.unit(s));
    mp_complex cd = cauchy_derivative(ev, s, mp_real("0.25"), 64);
    CHECK(abs(cd - d[1]) / ev.unit(s) <= mp_real("1e-6"));
    CHECK_THROWS_AS(ev(s, 3), PreconditionError);
}

TEST_CASE("differentiated functional equation") {
    ScopedPrecision sp(base_ctx());
    const auto& ev = fixture_ev();
    const auto& du = fixture_dual_ev();
    for (const char* t : {"3", "8.5"}) CHECK(feofd_residual(ev, du, c("0.5", t)).residual <= mp_real("1e-5"));
    auto a = feofd_residual(ev, du, c("0.7", "2"));
    auto b = feofd_residual(ev, du, c("0.3", "2"));
    CHECK(a.residual <= mp_real("1e-5"));
    CHECK(abs(a.residual - b.residual) <= mp_real("1e-5"));
    CHECK_THROWS_AS(feofd_residual(ev, du, c("0.5")), NearZeroError);
}

TEST_CASE("entire on a grid") {
    ScopedPrecision sp(base_ctx());
    const auto& ev = fixture_ev();
    for (int re = -2; re <= 3; ++re)
        for (int im = -15; im <= 15; im += 5) {
            mp_complex v;
            CHECK_NOTHROW(v = ev(mp_complex(mp_real(re), mp_real(im))));
            CHECK(finite(v));
        }
}

TEST_CASE("scan of an empty window") {
    ScopedPrecision sp(base_ctx());
    auto r = scan_zeros(fixture_ev(), 0.5, 1.5, 0.1);
    CHECK(r.zeros.empty());
    CHECK(r.total_count_by_argument == 0);
    CHECK_THROWS_AS(scan_zeros(fixture_ev(), 2, 1, 0.1), PreconditionError);
}

TEST_CASE("scan on [0, 14]") {
    ScopedPrecision sp(base_ctx());
    const auto& r = fixture_scan();
    CHECK(r.winding_sum() == r.total_count_by_argument);
    REQUIRE(!r.zeros.empty());
    for (const auto& z : r.zeros) {
        CHECK(z.winding >= 1);
        if (!z.simple()) continue;
        CHECK(z.winding == 1);
        mp_complex v = fixture_ev()(z.rho);
        CHECK(abs(v) <= z.tol_used);
        CHECK(abs(fixture_ev()(z.rho, 1)) > 10 * z.tol_used);
    }
    CHECK(r.zeros.front().simple());
    CHECK(abs(r.zeros.front().rho - c("0.5")) < mp_real("1e-20"));
    // nested windows and determinism
    auto a = scan_zeros(fixture_ev(), 0, 4, 0.1), b = scan_zeros(fixture_ev(), 0, 4, 0.1);
    CHECK(a.total_count_by_argument <= r.total_count_by_argument);
    std::ostringstream sa, sb;
    write_jsonl(sa, a);
    write_jsonl(sb, b);
    CHECK(sa.str() == sb.str());
    auto m = merge_reports({scan_zeros(fixture_ev(), 2, 4, 0.1), scan_zeros(fixture_ev(), 0, 2, 0.1)});
    CHECK(m.t0 == 0);
    CHECK(m.t1 == 4);
    CHECK(m.total_count_by_argument == a.total_count_by_argument);
    CHECK(m.winding_sum() == a.winding_sum());
    std::ostringstream csv;
    write_csv(csv, r);
    CHECK(csv.str().rfind("t,re_offset,winding,lambda_prime_abs,tol,status\n", 0) == 0);
}

TEST_CASE("residue of Delta on a synthetic function") {
    ScopedPrecision sp(base_ctx());
    const mp_complex rho0 = c("0.3", "1.1");
    // F = (s - rho0) e^{g}, g = s^2/3 + i s
    auto g = [](const mp_complex& s) { return s * s / mp_real(3) + mp_complex(mp_real(0), mp_real(1)) * s; };
    auto g1 = [](const mp_complex& s) { return mp_real(2) * s / mp_real(3) + mp_complex(mp_real(0), mp_real(1)); };
    const mp_complex g2(mp_real(2) / 3);
    TripleFn fn = [&](const mp_complex& s) {
        mp_complex e = std::exp(g(s)), d = s - rho0;
        return std::array<mp_complex, 3>{d * e, e * (mp_real(1) + d * g1(s)),
                                         e * (mp_real(2) * g1(s) + d * (g2 + g1(s) * g1(s)))};
    };
    auto r = residue_check(fn, rho0, mp_real("0.2"), 64, base_ctx());
    CHECK(abs(r.expected + std::exp(g(rho0))) < mp_real("1e-35"));
    CHECK(r.residual <= mp_real("1e-25"));
    auto r2 = residue_check(fn, rho0, mp_real("0.2"), 128, base_ctx());
    CHECK(r2.residual <= mp_real("1e-25"));

    const mp_complex rho1 = rho0 + c("0.15");
    TripleFn two = [&](const mp_complex& s) {
        auto a = fn(s);
        mp_complex d = s - rho1;
        return std::array<mp_complex, 3>{a[0] * d, a[1] * d + a[0], a[2] * d + mp_real(2) * a[1]};
    };
    CHECK_THROWS_AS(residue_check(two, rho0, mp_real("0.2"), 64, base_ctx()), IsolationError);
}

TEST_CASE("residue of Delta at the first fixture zero") {
    ScopedPrecision sp(base_ctx());
    const auto& r = fixture_scan();
    REQUIRE(!r.zeros.empty());
    REQUIRE(r.zeros.front().simple());
    auto a = delta_residue_check(fixture_ev(), r.zeros.front(), 64);
    auto b = delta_residue_check(fixture_ev(), r.zeros.front(), 128);
    CHECK(a.residual <= mp_real("1e-4"));
    CHECK(abs(a.integral - b.integral) / abs(a.expected) <= mp_max(a.residual, mp_real("1e-30")));
}

TEST_CASE("Taylor expansion of the dual side") {
    ScopedPrecision sp(base_ctx());
    const mpq alpha(1, 5);
    auto a = taylor_residuals(fixture(), alpha, mp_real("0.025"), 2, base_ctx());
    auto b = taylor_residuals(fixture(), alpha, mp_real("0.0125"), 2, base_ctx());
    REQUIRE(a.residual.size() == 2);
    mp_real ratio = a.residual[0] / b.residual[0];
    CHECK(ratio >= mp_real("1.5"));
    CHECK(ratio <= mp_real("2.5"));
    CHECK(a.residual[1] < a.residual[0]);
    CHECK(b.residual[1] < b.residual[0]);
    CHECK_THROWS_AS(taylor_residuals(fixture(), mpq(0), mp_real("0.05"), 1, base_ctx()), PreconditionError);
    CHECK_THROWS_AS(taylor_residuals(fixture(), alpha, mp_real("0.2"), 1, base_ctx()), PreconditionError);
}

TEST_CASE("A(z) by series and by contour") {
    ScopedPrecision sp(base_ctx());
    const mpq alpha(1, 5);
    auto s = a_eval(fixture(), alpha, mp_real(1), ARep::Series, base_ctx());
    auto k = a_eval_contour(fixture_ev(), alpha, mp_real(1));
    CHECK(abs(s.value - k.value) <= mp_real("1e-4"));
    CHECK(abs(s.value - k.value) <= s.error + k.error + mp_real("1e-15"));
}
