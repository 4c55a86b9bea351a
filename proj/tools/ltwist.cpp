#include "ltwist/analytic.hpp"
#include "ltwist/dirichlet.hpp"
#include "ltwist/errors.hpp"
#include "ltwist/series.hpp"
#include "ltwist/zeros.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

using namespace ltwist;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kResidual = 1, kUsage = 2, kInconclusive = 3 };

struct Globals {
    unsigned prec = 128;
    double tol = 1e-10;
    std::string form;
    std::string format = "text";
    int threads = 1;
    PrecisionContext ctx() const {
        PrecisionContext c;
        c.work_bits = prec;
        c.tol = tol;
        return c;
    }
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

mp_complex parse_point(const std::string& text) {
    auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {parse_real(text), mp_real(0)};
        return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("cannot parse complex point '" + text + "', expected re,im");
    }
}

mpq parse_alpha(const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError("cannot parse rational '" + text + "', expected p/q");
    }
}

std::string str(const mp_real& x, int digits = 20) { return to_string(x, digits); }

// One flat record per line; text prints key = value, csv uses the first record's keys.
void emit(const std::vector<json>& records, const std::string& format) {
    if (format == "jsonl") {
        for (const auto& r : records) std::cout << r.dump() << '\n';
        return;
    }
    auto cell = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (format == "csv") {
        if (records.empty()) return;
        std::string sep;
        for (auto it = records[0].begin(); it != records[0].end(); ++it) {
            std::cout << sep << it.key();
            sep = ",";
        }
        std::cout << '\n';
        for (const auto& r : records) {
            sep.clear();
            for (auto it = records[0].begin(); it != records[0].end(); ++it) {
                std::cout << sep << (r.contains(it.key()) ? cell(r[it.key()]) : "");
                sep = ",";
            }
            std::cout << '\n';
        }
        return;
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i) std::cout << '\n';
        for (auto it = records[i].begin(); it != records[i].end(); ++it)
            std::cout << it.key() << " = " << cell(it.value()) << '\n';
    }
}

const MaassForm& need_form(const Globals& g) {
    static std::optional<MaassForm> f;
    if (g.form.empty()) throw UsageError("this command needs --form <file>");
    if (!f) f = parse_form_file(g.form);
    return *f;
}

// ---------------------------------------------------------------------------------------------
// verify suites

struct Case {
    std::string name;
    double tol;
    std::function<mp_real(const PrecisionContext&)> residual;
};

struct SuiteResult {
    std::string suite;
    int run = 0, passed = 0;
    double worst = 0;
    std::string worst_case;
    double worst_2x = 0;
    double seconds = 0;
};

mp_complex cx(double re, double im = 0) { return {mp_real(re), mp_real(im)}; }

mp_complex k_cosh_integral(const mp_complex& nu, const mp_real& y) {
    const mp_real h("0.01");
    mp_complex acc = mp_complex(exp(-y) / 2);
    for (int j = 1;; ++j) {
        mp_real e = exp(-y * cosh(h * j));
        if (e < pow(mp_real(2), -static_cast<int>(current_bits()) - 10)) break;
        acc += e * std::cosh(nu * (h * j));
    }
    return acc * h;
}

std::vector<Case> specfun_suite() {
    std::vector<Case> cs;
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 10; ++i) {
        double re = 3 * u(rng) + 0.1, im = 20 * u(rng);
        cs.push_back({"gamma_r recurrence", 1e-12, [=](const PrecisionContext& ctx) {
                          mp_complex s = cx(re, im);
                          mp_complex rhs = gamma_r(s, ctx) * s / (2 * pi());
                          return abs(gamma_r(s + mp_real(2), ctx) - rhs) / abs(rhs);
                      }});
    }
    cs.push_back({"trigamma(1)", 1e-12, [](const PrecisionContext& ctx) {
                      return abs(trigamma(cx(1), ctx) - pi() * pi() / 6);
                  }});
    cs.push_back({"trigamma(1/2)", 1e-12, [](const PrecisionContext& ctx) {
                      return abs(trigamma(cx(0.5), ctx) - pi() * pi() / 2);
                  }});
    for (int i = 0; i < 10; ++i) {
        double nr = i % 2 ? 0.9 * u(rng) : 0, ni = 6 + 6 * u(rng), y = 4 + 3.8 * u(rng);
        cs.push_back({"K_nu vs cosh integral", 1e-12, [=](const PrecisionContext& ctx) {
                          mp_complex nu = cx(nr, ni);
                          mp_complex ref = k_cosh_integral(nu, mp_real(y));
                          mp_real scale = mp_max(abs(ref), exp(-pi() * abs(nu.imag()) / 2));
                          return abs(bessel_k(nu, mp_real(y), ctx) - ref) / scale;
                      }});
    }
    for (double z : {-0.55, -0.7, -0.9}) {
        cs.push_back({"2F1 transformation vs series", 1e-12, [=](const PrecisionContext& ctx) {
                          mp_complex a = cx(0.4, 1.3), b = cx(-0.2, 1.3), c = cx(1.5);
                          mp_complex ref = hyp2f1_series(a, b, c, cx(z));
                          return abs(hyp2f1(a, b, c, mp_real(z), ctx) - ref) / abs(ref);
                      }});
    }
    cs.push_back({"Mellin of exp", 1e-12, [](const PrecisionContext& ctx) {
                      ComplexFn e = [](const mp_real& y) { return mp_complex(exp(-y)); };
                      return abs(quad_mellin(e, cx(1.5), ctx).value - cx(1));
                  }});
    return cs;
}

std::vector<Case> dirichlet_suite() {
    std::vector<Case> cs;
    for (std::int64_t q : {3, 5, 7, 11, 13}) {
        cs.push_back({"orthogonality q=" + std::to_string(q), 1e-12, [=](const PrecisionContext&) {
                          auto chars = characters(q);
                          mp_real worst = 0;
                          for (const auto& a : chars)
                              for (const auto& b : chars) {
                                  mp_complex acc(mp_real(0));
                                  for (std::int64_t n = 0; n < q; ++n) acc += a(n) * std::conj(b(n));
                                  mp_real want = a.index == b.index ? mp_real(q - 1) : mp_real(0);
                                  worst = mp_max(worst, abs(acc - mp_complex(want)));
                              }
                          return worst;
                      }});
        cs.push_back({"|gauss sum|^2 = q, q=" + std::to_string(q), 1e-12, [=](const PrecisionContext&) {
                          mp_real worst = 0;
                          for (const auto& c : characters(q))
                              if (!c.principal) worst = mp_max(worst, abs(norm(gauss_sum(c)) - mp_real(q)));
                          return worst;
                      }});
        for (auto kind : {TrigKind::Cos, TrigKind::Sin}) {
            cs.push_back({std::string(kind == TrigKind::Cos ? "cos" : "sin") + " expansion q=" + std::to_string(q),
                          1e-12, [=](const PrecisionContext&) {
                              auto e = trig_coeffs(q, kind);
                              mp_real worst = 0;
                              for (std::int64_t n = 0; n < q; ++n) {
                                  mp_real th = 2 * pi() * n / q;
                                  mp_real want = kind == TrigKind::Cos ? cos(th) : sin(th);
                                  worst = mp_max(worst, abs(e.evaluate(n) - want));
                              }
                              if (kind == TrigKind::Cos)
                                  worst = mp_max(worst, abs(e.principal_coeff - mp_complex(mp_real(-q) / (q - 1))));
                              return worst;
                          }});
        }
    }
    return cs;
}

std::vector<Case> identities_suite() {
    std::vector<Case> cs;
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> re(-0.8, 1.8), im(-12, 12), om(-3, 3);
    const std::pair<double, double> nus[] = {{0.05, 0}, {7.0 / 64, 0}, {0, 1.3}, {0, 9.5}};
    for (int k : {0, 1})
        for (int e : {1, -1})
            for (auto [nr, ni] : nus)
                for (int i = 0; i < 3; ++i) {
                    double sr = re(rng) + 0.013, si = im(rng), w = om(rng);
                    cs.push_back({"H functional equation", 1e-8, [=](const PrecisionContext& ctx) {
                                      return feofg_residual({k, e, cx(nr, ni)}, cx(sr, si), mp_real(w), ctx).residual;
                                  }});
                }
    for (int i = 0; i < 12; ++i) {
        int k = (i / 2) % 2, e = i % 2 ? -1 : 1;
        double ni = 0.5 + 11 * (0.5 + 0.5 * om(rng) / 3), sr = re(rng) + 0.013, si = im(rng);
        cs.push_back({"digamma identity", 1e-10, [=](const PrecisionContext& ctx) {
                          return digamma_xf_residual({k, e, cx(0, ni)}, cx(sr, si), ctx).residual;
                      }});
    }
    const std::pair<std::pair<double, double>, std::pair<double, double>> phis[] = {
        {{0, 0}, {2, 0}}, {{0.1, 0}, {3, 0}}, {{0, 2}, {2, 1}}};
    for (auto [nu, s] : phis) {
        cs.push_back({"Phi against trigamma", 1e-8, [=](const PrecisionContext& ctx) {
                          return phi_machinery(cx(nu.first, nu.second), cx(s.first, s.second), ctx).residual;
                      }});
    }
    for (auto kind : {TrigKindM::Sin, TrigKindM::Cos})
        for (double b : {0.0, 0.7, 1.5}) {
            cs.push_back({kind == TrigKindM::Sin ? "sine Mellin pair" : "cosine Mellin pair", 1e-8,
                          [=](const PrecisionContext& ctx) {
                              return mellin_pair_check(cx(1.3), cx(0.2, 0.9), mp_real(2), mp_real(b), kind, ctx)
                                  .residual;
                          }});
        }
    const FormParams classes[] = {{0, 1, cx(0, 9.5)}, {0, -1, cx(0, 9.5)}, {1, 1, cx(0, 1.3)}, {1, -1, cx(0, 1.3)}};
    for (const auto& p : classes) {
        cs.push_back({"Mellin of V against gamma factor", 1e-9, [=](const PrecisionContext& ctx) {
                          mp_complex s = cx(1.2, 0.7);
                          mp_real worst = 0;
                          for (int sign : {1, -1}) {
                              VProfile v(p, sign, ctx);
                              if (v.zero()) continue;
                              ComplexFn g = [&](const mp_real& y) { return v(y); };
                              mp_complex want = gamma_factor(p, sign, s, ctx);
                              worst = mp_max(worst, abs(quad_mellin(g, s, ctx).value - want) / abs(want));
                          }
                          return worst;
                      }});
    }
    return cs;
}

std::vector<Case> reductions_suite() {
    std::vector<Case> cs;
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> num(1, 89), den(2, 50);
    for (int k : {0, 1})
        for (int a : {0, 1})
            for (unsigned t = 0; t <= 8; ++t)
                for (int trial = 0; trial < 3; ++trial) {
                    unsigned seed = rng();
                    int e = trial == 1 ? -1 : 1;
                    cs.push_back({"reduction k=" + std::to_string(k) + " a=" + std::to_string(a) +
                                      " t=" + std::to_string(t),
                                  0, [=](const PrecisionContext&) mutable {
                                      std::mt19937 r(seed);
                                      for (;;) {
                                          mpq s(num(r), den(r)), nu(num(r), 3 * den(r));
                                          try {
                                              return mp_real(reduction_check(k, t, s, nu, a, e).ok() ? 0 : 1);
                                          } catch (const PoleSampleError&) {
                                          }
                                      }
                                  }});
                }
    return cs;
}

SuiteResult run_suite(const std::string& name, const std::vector<Case>& cases, const PrecisionContext& ctx) {
    SuiteResult r;
    r.suite = name;
    auto t0 = std::chrono::steady_clock::now();
    std::size_t worst_i = 0;
    double worst_ratio = -1;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        double res = to_double(cases[i].residual(ctx));
        ++r.run;
        if (res <= cases[i].tol) ++r.passed;
        double ratio = cases[i].tol > 0 ? res / cases[i].tol : res;
        if (ratio > worst_ratio || res != res) {
            worst_ratio = ratio;
            worst_i = i;
            r.worst = res;
        }
    }
    // the worst case again at doubled precision, against precision-starved passes
    if (!cases.empty()) {
        PrecisionContext hi = ctx.with_bits(2 * ctx.work_bits);
        ScopedPrecision sp(hi);
        r.worst_case = cases[worst_i].name;
        r.worst_2x = to_double(cases[worst_i].residual(hi));
        if (!(r.worst_2x <= cases[worst_i].tol)) r.passed = std::min(r.passed, r.run - 1);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

int cmd_verify(const Globals& g, const std::string& suite) {
    const PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    std::vector<Case> cases;
    if (suite == "specfun")
        cases = specfun_suite();
    else if (suite == "dirichlet")
        cases = dirichlet_suite();
    else if (suite == "identities")
        cases = identities_suite();
    else if (suite == "reductions")
        cases = reductions_suite();
    else
        throw UsageError("unknown suite '" + suite + "'");
    auto r = run_suite(suite, cases, ctx);
    char buf[32];
    auto sci = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return std::string(buf);
    };
    emit({json{{"suite", r.suite},
               {"cases", r.run},
               {"passed", r.passed},
               {"worst_residual", sci(r.worst)},
               {"worst_case", r.worst_case},
               {"worst_residual_2x_prec", sci(r.worst_2x)},
               {"status", r.passed == r.run ? "pass" : "fail"}}},
         g.format);
    std::cerr << "# " << suite << " wall time " << sci(r.seconds) << " s\n";
    return r.passed == r.run ? kOk : kResidual;
}

// ---------------------------------------------------------------------------------------------

int cmd_form_check(const Globals& g, const std::string& path) {
    PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    MaassForm f = parse_form_file(path);
    emit({json{{"level", f.level},
               {"weight", f.weight},
               {"eps", f.eps},
               {"nu", to_string(f.nu, 20)},
               {"eta", to_string(f.eta, 10)},
               {"nebentypus", f.xi_trivial() ? "trivial" : "nontrivial"},
               {"primes", f.prime_coeffs.size()},
               {"coeff_bound", f.coeff_bound},
               {"self_dual", equivalent(dual_form(f), f, g.tol)},
               {"status", "valid"}}},
         g.format);
    return kOk;
}

int cmd_eval(const Globals& g, const std::string& what, const std::string& point, const std::string& alpha,
             unsigned j, const std::string& kind) {
    const PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    const MaassForm& f = need_form(g);
    mp_complex s = parse_point(point);
    json rec{{"object", what}, {"point", to_string(s, 20)}};
    if (what == "f") {
        auto v = eval_form(f, s.real(), s.imag(), ctx);
        rec["value"] = to_string(v.value, 25);
        rec["error_bound"] = str(v.tail_bound, 3);
        rec["terms"] = v.terms;
    } else if (what == "lambda") {
        LambdaEvaluator ev(f, ctx);
        auto d = ev.derivs(s);
        rec["value"] = to_string(d[0], 25);
        rec["derivative"] = to_string(d[1], 25);
        rec["second_derivative"] = to_string(d[2], 25);
        rec["gamma_abs"] = str(ev.unit(s), 20);
    } else if (what == "series") {
        std::int64_t X = std::min<std::int64_t>(f.coeff_bound, 20000);
        CoeffTable t = kind == "lambda" ? lambda_coeffs(f, X)
                       : kind == "c"    ? c_coeffs(f, X)
                       : kind == "a"    ? a_coeffs(f, X)
                                        : throw UsageError("unknown coefficient kind '" + kind + "'");
        std::optional<TwistSpec> tw;
        if (!alpha.empty()) tw = TwistSpec{parse_alpha(alpha), j};
        auto v = eval_series(t, s, tw, ctx);
        rec["kind"] = kind;
        if (tw) {
            rec["alpha"] = alpha;
            rec["j"] = j;
        }
        rec["value"] = to_string(v.value, 25);
        rec["tail_bound"] = str(v.tail_bound, 3);
        rec["terms"] = X;
    } else {
        throw UsageError("eval expects f, lambda or series");
    }
    emit({rec}, g.format);
    return kOk;
}

// ---------------------------------------------------------------------------------------------
// zero scanning, optionally over forked workers

json record_json(const ZeroRecord& z) {
    const int d = static_cast<int>(current_bits() * 0.30103) + 5;
    return {{"rho", {str(z.rho.real(), d), str(z.rho.imag(), d)}},
            {"winding", z.winding},
            {"lpa", str(z.lambda_prime_abs, d)},
            {"la", str(z.lambda_abs, d)},
            {"box", {str(z.box.center.real(), d), str(z.box.center.imag(), d), str(z.box.re_radius, d),
                     str(z.box.im_radius, d)}},
            {"tol", str(z.tol_used, d)},
            {"simple", z.simple()},
            {"note", z.note}};
}

ZeroRecord record_from_json(const json& j) {
    ZeroRecord z;
    auto r = [](const json& v) { return parse_real(v.get<std::string>()); };
    z.rho = mp_complex(r(j["rho"][0]), r(j["rho"][1]));
    z.winding = j["winding"];
    z.lambda_prime_abs = r(j["lpa"]);
    z.lambda_abs = r(j["la"]);
    z.box = {mp_complex(r(j["box"][0]), r(j["box"][1])), r(j["box"][2]), r(j["box"][3])};
    z.tol_used = r(j["tol"]);
    z.status = j["simple"].get<bool>() ? ZeroStatus::Simple : ZeroStatus::Inconclusive;
    z.note = j["note"];
    return z;
}

[[noreturn]] void rethrow_worker(const json& j) {
    std::string kind = j["kind"], msg = j["error"];
    if (kind == "inconclusive") throw InconclusiveError(msg);
    if (kind == "precondition") throw PreconditionError(msg);
    throw std::runtime_error(msg);
}

ScanReport parallel_scan(const LambdaEvaluator& ev, double t0, double t1, double step, int threads) {
    const ScanOptions opt;
    const int boxes = std::max(1, static_cast<int>(std::ceil((t1 - t0) / opt.box_height - 1e-9)));
    threads = std::clamp(threads, 1, boxes);
    if (threads == 1) return scan_zeros(ev, t0, t1, step, opt);
    // contiguous runs of whole boxes, so every worker sees the same box edges as a serial scan
    std::vector<std::pair<double, double>> windows;
    for (int w = 0; w < threads; ++w) {
        int b0 = boxes * w / threads, b1 = boxes * (w + 1) / threads;
        double a = t0 + b0 * opt.box_height, b = w + 1 == threads ? t1 : t0 + b1 * opt.box_height;
        windows.push_back({a, b});
    }
    std::cout.flush();
    std::vector<std::pair<pid_t, int>> workers;
    for (const auto& [a, b] : windows) {
        int fd[2];
        if (pipe(fd) != 0) throw std::runtime_error("pipe failed");
        pid_t pid = fork();
        if (pid < 0) throw std::runtime_error("fork failed");
        if (pid == 0) {
            close(fd[0]);
            json out;
            try {
                ScanReport r = scan_zeros(ev, a, b, step, opt);
                out = {{"t0", r.t0}, {"t1", r.t1}, {"count", r.total_count_by_argument}, {"zeros", json::array()}};
                for (const auto& z : r.zeros) out["zeros"].push_back(record_json(z));
            } catch (const InconclusiveError& e) {
                out = {{"error", e.what()}, {"kind", "inconclusive"}};
            } catch (const PreconditionError& e) {
                out = {{"error", e.what()}, {"kind", "precondition"}};
            } catch (const std::exception& e) {
                out = {{"error", e.what()}, {"kind", "other"}};
            }
            std::string text = out.dump();
            for (std::size_t off = 0; off < text.size();) {
                ssize_t n = write(fd[1], text.data() + off, text.size() - off);
                if (n <= 0) _exit(1);
                off += static_cast<std::size_t>(n);
            }
            close(fd[1]);
            _exit(0);
        }
        close(fd[1]);
        workers.push_back({pid, fd[0]});
    }
    std::vector<ScanReport> parts;
    std::optional<json> failure;
    for (auto [pid, fd] : workers) {
        std::string text;
        char buf[4096];
        for (ssize_t n; (n = read(fd, buf, sizeof buf)) > 0;) text.append(buf, static_cast<std::size_t>(n));
        close(fd);
        int status = 0;
        waitpid(pid, &status, 0);
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded() || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            failure = json{{"error", "scan worker died"}, {"kind", "other"}};
            continue;
        }
        if (j.contains("error")) {
            if (!failure) failure = j;
            continue;
        }
        ScanReport r;
        r.t0 = j["t0"];
        r.t1 = j["t1"];
        r.total_count_by_argument = j["count"];
        for (const auto& z : j["zeros"]) r.zeros.push_back(record_from_json(z));
        parts.push_back(std::move(r));
    }
    if (failure) rethrow_worker(*failure);
    return merge_reports(std::move(parts));
}

int cmd_scan(const Globals& g, double t0, double t1, double step) {
    const PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    const MaassForm& f = need_form(g);
    if (!(t1 > t0) || t0 < 0 || step <= 0) throw UsageError("zeros scan needs 0 <= t0 < t1 and step > 0");
    LambdaEvaluator ev(f, ctx);
    ScanReport r = parallel_scan(ev, t0, t1, step, g.threads);
    if (g.format == "jsonl")
        write_jsonl(std::cout, r);
    else if (g.format == "csv")
        write_csv(std::cout, r);
    else
        write_text(std::cout, r);
    if (r.winding_sum() != r.total_count_by_argument) return kResidual;
    for (const auto& z : r.zeros)
        if (!z.simple()) return kInconclusive;
    return kOk;
}

int cmd_twist(const Globals& g, std::int64_t q, const std::string& point) {
    const PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    const MaassForm& f = need_form(g);
    if (!is_prime(q)) throw UsageError("twist decompose needs a prime q");
    mp_complex s = parse_point(point);
    std::int64_t X = std::min<std::int64_t>(f.coeff_bound, 20000);
    auto r = twist_decomposition(f, q, s, X);
    bool ok = r.residual <= mp_max(r.tail_bound, mp_real(g.tol));
    emit({json{{"q", q},
               {"s", to_string(s, 20)},
               {"lhs", to_string(r.lhs, 25)},
               {"rhs", to_string(r.rhs, 25)},
               {"residual", str(r.residual, 3)},
               {"tail_bound", str(r.tail_bound, 3)},
               {"status", ok ? "pass" : "fail"}}},
         g.format);
    return ok ? kOk : kResidual;
}

int cmd_rs(const Globals& g, std::int64_t x) {
    const PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    auto r = rs_average(need_form(g), x);
    bool flagged = abs(r.average - 1) > mp_real("0.25");
    emit({json{{"x", x},
               {"average", str(r.average, 15)},
               {"primes", r.prime_count},
               {"min_abs", str(r.min_abs, 15)},
               {"min_prime", r.min_prime},
               {"first_small", r.first_small},
               {"flag", flagged ? "|average - 1| > 0.25" : ""}}},
         g.format);
    return kOk;
}

int cmd_taylor(const Globals& g, const std::string& alpha, unsigned T, const std::string& y) {
    const PrecisionContext ctx = g.ctx();
    ScopedPrecision sp(ctx);
    mp_real yy;
    try {
        yy = parse_real(y);
    } catch (const std::exception&) {
        throw UsageError("cannot parse --y '" + y + "'");
    }
    auto r = taylor_residuals(need_form(g), parse_alpha(alpha), yy, T, ctx);
    std::vector<json> out;
    for (unsigned t = 1; t <= T; ++t)
        out.push_back({{"alpha", alpha},
                       {"y", y},
                       {"T", t},
                       {"lhs", to_string(r.lhs, 20)},
                       {"partial", to_string(r.partial[t - 1], 20)},
                       {"residual", str(r.residual[t - 1], 6)},
                       {"contour", str(r.contour, 6)}});
    emit(out, g.format);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Additive twists of Maass form L-functions: evaluation, identities and zeros"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    if (const char* env = std::getenv("LTWIST_PREC")) {
        try {
            g.prec = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            std::cerr << "error: LTWIST_PREC must be a positive integer\n";
            return kUsage;
        }
    }
    app.add_option("--prec", g.prec, "working precision in bits")->check(CLI::Range(32u, 4096u));
    app.add_option("--tol", g.tol, "residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--form", g.form, "FORM v1 file");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "csv", "jsonl"}));
    app.add_option("--threads", g.threads, "worker processes for zero scans")->check(CLI::Range(1, 256));

    std::function<int()> action;

    auto* verify = app.add_subcommand("verify", "run a property suite");
    std::string suite;
    verify->add_option("suite", suite, "specfun|dirichlet|identities|reductions")
        ->required()
        ->check(CLI::IsMember({"specfun", "dirichlet", "identities", "reductions"}));
    verify->callback([&] { action = [&] { return cmd_verify(g, suite); }; });

    auto* form = app.add_subcommand("form", "FORM file utilities");
    form->require_subcommand(1);
    auto* check = form->add_subcommand("check", "parse and validate a FORM file");
    std::string form_path;
    check->add_option("file", form_path)->required();
    check->callback([&] { action = [&] { return cmd_form_check(g, form_path); }; });

    auto* eval = app.add_subcommand("eval", "evaluate f, Lambda or a Dirichlet series");
    std::string what, point, alpha, kind = "lambda";
    unsigned j = 0;
    eval->add_option("object", what, "f|lambda|series")->required()->check(CLI::IsMember({"f", "lambda", "series"}));
    eval->add_option("--s", point, "point re,im (z = x,y for f)")->required();
    eval->add_option("--alpha", alpha, "additive twist p/q");
    eval->add_option("--j", j, "derivative of cos in the twist");
    eval->add_option("--kind", kind, "coefficients lambda|c|a")->check(CLI::IsMember({"lambda", "c", "a"}));
    eval->callback([&] { action = [&] { return cmd_eval(g, what, point, alpha, j, kind); }; });

    auto* zeros = app.add_subcommand("zeros", "zeros of Lambda");
    zeros->require_subcommand(1);
    auto* scan = zeros->add_subcommand("scan", "scan the critical strip near the line");
    double t0 = 0, t1 = 0, step = 0.1;
    scan->add_option("--t0", t0)->required();
    scan->add_option("--t1", t1)->required();
    scan->add_option("--step", step);
    scan->callback([&] { action = [&] { return cmd_scan(g, t0, t1, step); }; });

    auto* twist = app.add_subcommand("twist", "additive twist identities");
    twist->require_subcommand(1);
    auto* decompose = twist->add_subcommand("decompose", "cosine twist against character twists");
    std::int64_t q = 0;
    std::string tpoint;
    decompose->add_option("--q", q)->required();
    decompose->add_option("--s", tpoint)->required();
    decompose->callback([&] { action = [&] { return cmd_twist(g, q, tpoint); }; });

    auto* rs = app.add_subcommand("rs", "average of |lambda(p)|^2 over primes");
    std::int64_t x = 0;
    rs->add_option("--x", x)->required()->check(CLI::PositiveNumber);
    rs->callback([&] { action = [&] { return cmd_rs(g, x); }; });

    auto* taylor = app.add_subcommand("taylor", "dual side against its Mellin-Barnes expansion");
    std::string talpha, ty;
    unsigned T = 1;
    taylor->add_option("--alpha", talpha)->required();
    taylor->add_option("--T", T)->required()->check(CLI::Range(1u, 12u));
    taylor->add_option("--y", ty)->required();
    taylor->callback([&] { action = [&] { return cmd_taylor(g, talpha, T, ty); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << '\n';
        return kUsage;
    } catch (const NotPrimeError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return kInconclusive;
    } catch (const ConvergenceError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return kInconclusive;
    } catch (const TailError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return kInconclusive;
    } catch (const NearZeroError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return kInconclusive;
    } catch (const IsolationError& e) {
        std::cerr << "inconclusive: " << e.what() << '\n';
        return kInconclusive;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResidual;
    }
}
