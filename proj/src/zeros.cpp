#include "ltwist/zeros.hpp"

#include "ltwist/errors.hpp"
#include "ltwist/series.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace ltwist {

namespace {

const mp_complex I(mp_real(0), mp_real(1));

mp_complex cx(const mp_real& v) { return mp_complex(v); }

constexpr double kPanel = 0.1;
constexpr unsigned kNodes = 20;

mp_complex theta_at(const std::vector<mp_complex>& lam, const VProfile& w, bool odd, const mp_real& y,
                    std::int64_t M) {
    mp_complex acc(mp_real(0));
    for (std::int64_t n = 1; n <= M; ++n) {
        const mp_complex& c = lam[n];
        if (c.real() == 0 && c.imag() == 0) continue;
        mp_real ny = y * n;
        mp_complex v = w(ny);
        if (odd) v *= ny;
        acc += c * v / sqrt(mp_real(n));
    }
    return acc;
}

// log of a bound for |W(u)|
double log_w_bound(const FormParams& p, bool odd, double u) { return log_v_bound(p, u) + (odd ? std::log(u) : 0.0); }

bool odd_kernel(const FormParams& p) { return p.k == 0 && p.eps == -1; }

mp_real arg_of(const mp_complex& z) { return atan2(z.imag(), z.real()); }

}  // namespace

LambdaEvaluator::Side LambdaEvaluator::build(const MaassForm& g, const mp_real& lo, const mp_real& hi,
                                             const PrecisionContext& ctx) {
    const FormParams p = FormParams::of(g);
    const bool odd = odd_kernel(p);
    VProfile w(p, odd ? -1 : 1, ctx);
    const double target = to_double(log(v_scale(p))) - 0.75 * ctx.work_bits * std::log(2.0);
    auto terms = [&](double y) {
        const double r = std::exp(-M_PI * y);
        for (std::int64_t M = 1;; ++M) {
            double n = static_cast<double>(M + 1);
            if (2 * M_PI * n * y < 4) continue;
            double tail = std::log(16.0) + kTheta * std::log(n) + log_w_bound(p, odd, n * y) - std::log1p(-r);
            if (tail < target) return M;
            if (M > 10000000) throw TailError("lambda: kernel truncation does not converge", 0);
        }
    };
    const double ylo = to_double(exp(lo));
    const std::int64_t M0 = terms(ylo);
    if (M0 > g.coeff_bound) throw TailError("lambda: needs " + std::to_string(M0) + " coefficients", 0);
    const auto lam = hecke_table(g, M0);

    Side side;
    const auto& gl = gauss_legendre(kNodes);
    const int panels = std::max(1, static_cast<int>(std::ceil(to_double(hi - lo) / kPanel)));
    const mp_real width = (hi - lo) / panels;
    for (int j = 0; j < panels; ++j) {
        const mp_real a = lo + width * j, half = width / 2, mid = a + half;
        for (unsigned i = 0; i < kNodes; ++i) {
            mp_real u = mid + half * gl.x[i];
            mp_real y = exp(u);
            std::int64_t M = std::min<std::int64_t>(terms(to_double(y)), M0);
            side.u.push_back(u);
            side.wth.push_back(theta_at(lam, w, odd, y, M) * (half * gl.w[i]));
        }
    }
    return side;
}

LambdaEvaluator::LambdaEvaluator(const MaassForm& f, const PrecisionContext& ctx, std::optional<mp_real> y0)
    : f_(f), params_(FormParams::of(f)), ctx_(ctx) {
    ScopedPrecision sp(ctx);
    const mp_real N(f.level);
    y0_ = y0 ? *y0 : 1 / sqrt(N);
    if (y0_ <= 0) throw PreconditionError("lambda: split height must be positive");
    logN_ = log(N);
    root_ = f.eta;
    if (f.weight == 0 && f.eps == -1) root_ = -root_;

    // beyond y_max the kernel is below 2^{-3 bits/4} of its bulk size, with room for y^3
    const bool odd = odd_kernel(params_);
    const double target = to_double(log(v_scale(params_))) - 0.75 * ctx.work_bits * std::log(2.0) - 5;
    double ymax = std::max(2.0, 2 * to_double(y0_));
    while (log_w_bound(params_, odd, ymax) + 3 * std::log(ymax) > target) ymax += 0.25;
    const mp_real hi = log(mp_real(ymax));

    const MaassForm fd = dual_form(f);
    const mp_real lo_near = log(y0_), lo_far = -log(N * y0_);
    near_ = std::make_shared<Side>(build(f, lo_near, hi, ctx));
    if (equivalent(f, fd, 1e-30) && abs(lo_near - lo_far) < mp_eps() * 16)
        far_ = near_;
    else
        far_ = std::make_shared<Side>(build(fd, lo_far, hi, ctx));
}

std::array<mp_complex, 3> LambdaEvaluator::derivs(const mp_complex& s) const {
    ScopedPrecision sp(ctx_);
    std::array<mp_complex, 3> out;
    out.fill(mp_complex(mp_real(0)));
    const mp_complex e1 = s - mp_real(0.5);
    for (std::size_t j = 0; j < near_->u.size(); ++j) {
        const mp_real& u = near_->u[j];
        mp_complex t = near_->wth[j] * std::exp(e1 * u);
        out[0] += t;
        out[1] += t * u;
        out[2] += t * (u * u);
    }
    std::array<mp_complex, 3> far;
    far.fill(mp_complex(mp_real(0)));
    for (std::size_t j = 0; j < far_->u.size(); ++j) {
        mp_real L = logN_ + far_->u[j];
        mp_complex t = far_->wth[j] * std::exp(-e1 * L);
        far[0] += t;
        far[1] -= t * L;
        far[2] += t * (L * L);
    }
    for (int d = 0; d < 3; ++d) out[d] += root_ * far[d];
    return out;
}

mp_complex LambdaEvaluator::operator()(const mp_complex& s, unsigned order) const {
    if (order > 2) throw PreconditionError("lambda_derivs: order must be at most 2");
    return derivs(s)[order];
}

mp_real LambdaEvaluator::unit(const mp_complex& s) const {
    ScopedPrecision sp(ctx_);
    return abs(gamma_factor(params_, 1, s, ctx_));
}

mp_complex lambda_complete(const MaassForm& f, const mp_complex& s, const PrecisionContext& ctx) {
    return LambdaEvaluator(f, ctx)(s);
}

mp_complex lambda_derivs(const MaassForm& f, const mp_complex& s, unsigned order, const PrecisionContext& ctx) {
    return LambdaEvaluator(f, ctx)(s, order);
}

FunctionalEquationResult fe_residual(const LambdaEvaluator& ev, const LambdaEvaluator& dual, const mp_complex& s) {
    ScopedPrecision sp(ev.context());
    const mp_complex one(mp_real(1));
    const mp_real N(ev.form().level);
    FunctionalEquationResult r;
    r.lhs = ev(s);
    r.rhs = ev.root_factor() * std::pow(cx(N), mp_complex(mp_real(0.5)) - s) * dual(one - s);
    r.residual = abs(r.lhs - r.rhs) / ev.unit(s);
    return r;
}

FunctionalEquationResult fe_residual(const MaassForm& f, const mp_complex& s, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    LambdaEvaluator ev(f, ctx);
    LambdaEvaluator dual(dual_form(f), ctx, mp_real(0.8) / sqrt(mp_real(f.level)));
    return fe_residual(ev, dual, s);
}

FunctionalEquationResult feofd_residual(const LambdaEvaluator& ev, const LambdaEvaluator& dual, const mp_complex& s) {
    const PrecisionContext& ctx = ev.context();
    ScopedPrecision sp(ctx);
    const mp_complex one(mp_real(1));
    const mp_complex sd = one - s;
    const auto a = ev.derivs(s);
    const auto b = dual.derivs(sd);
    const mp_real ua = ev.unit(s), ub = dual.unit(sd);
    if (abs(a[0]) < 10 * ctx.tol * ua || abs(b[0]) < 10 * ctx.tol * ub)
        throw NearZeroError("feofd_residual: Lambda too close to zero at s = " + to_string(s, 12));
    const mp_complex pf = psi_f_prime(ev.params(), s);
    const mp_complex pd = psi_f_prime(dual.params(), sd);
    const mp_complex delta_f = a[2] - a[1] * a[1] / a[0] - pf * a[0];
    const mp_complex delta_d = b[2] - b[1] * b[1] / b[0] - pd * b[0];
    const mp_real N(ev.form().level);
    FunctionalEquationResult r;
    r.lhs = delta_f + (pf - pd) * a[0];
    r.rhs = ev.root_factor() * std::pow(cx(N), mp_complex(mp_real(0.5)) - s) * delta_d;
    r.residual = abs(r.lhs - r.rhs) / (ua * mp_max(mp_real(1), abs(pf)));
    return r;
}

FunctionalEquationResult feofd_residual(const MaassForm& f, const mp_complex& s, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    LambdaEvaluator ev(f, ctx);
    LambdaEvaluator dual(dual_form(f), ctx, mp_real(0.8) / sqrt(mp_real(f.level)));
    return feofd_residual(ev, dual, s);
}

mp_complex cauchy_derivative(const LambdaEvaluator& ev, const mp_complex& s, const mp_real& r, unsigned M) {
    ScopedPrecision sp(ev.context());
    mp_complex acc(mp_real(0));
    const mp_real tp = 2 * pi();
    for (unsigned j = 0; j < M; ++j) {
        mp_complex e = std::polar(mp_real(1), tp * j / M);
        acc += ev(s + r * e) / (r * e);
    }
    return acc / mp_real(M);
}

// ---------------------------------------------------------------------------------------------
// zero scanning

namespace {

class Scanner {
public:
    Scanner(const LambdaEvaluator& ev, double step, const ScanOptions& opt) : ev_(ev), step_(step), opt_(opt) {}

    mp_complex at(const mp_real& re, const mp_real& im) const { return ev_(mp_complex(re, im)); }

    // Moves t to a nearby height where Lambda stays away from zero across the box width.
    double safe_edge(double t) const {
        const double d = std::min(step_ / 2, opt_.box_height / 8);
        for (int k = 0; k < 16; ++k) {
            int m = (k + 1) / 2;
            double cand = t + (k % 2 == 1 ? -m * d : m * d);
            if (edge_ok(cand)) return cand;
        }
        throw InconclusiveError("scan_zeros: no safe horizontal edge near t = " + std::to_string(t));
    }

    // Change of arg Lambda along the segment a -> b, refined until each piece turns by < pi/4.
    mp_real arg_change(const mp_complex& a, const mp_complex& b) const {
        const int n = std::max(1, static_cast<int>(std::ceil(to_double(abs(b - a)) / step_)));
        mp_real total = 0;
        mp_complex pa = a, va = ev_(a);
        for (int j = 1; j <= n; ++j) {
            mp_complex pb = a + (b - a) * mp_real(j) / mp_real(n);
            mp_complex vb = ev_(pb);
            total += refine(pa, va, pb, vb, 0);
            pa = pb;
            va = vb;
        }
        return total;
    }

    int winding_by_argument(double re0, double re1, double t0, double t1) const {
        mp_complex c[4] = {{mp_real(re0), mp_real(t0)}, {mp_real(re1), mp_real(t0)}, {mp_real(re1), mp_real(t1)},
                           {mp_real(re0), mp_real(t1)}};
        mp_real total = 0;
        for (int e = 0; e < 4; ++e) total += arg_change(c[e], c[(e + 1) % 4]);
        mp_real w = total / (2 * pi());
        mp_real rw = round(w);
        if (abs(w - rw) > mp_real(0.05)) throw InconclusiveError("scan_zeros: argument count not integral");
        return rw.convert_to<int>();
    }

    // (1/2 pi i) oint Lambda'/Lambda by composite Gauss-Legendre on the box edges.
    mp_real winding_by_quadrature(double re0, double re1, double t0, double t1) const {
        mp_complex c[4] = {{mp_real(re0), mp_real(t0)}, {mp_real(re1), mp_real(t0)}, {mp_real(re1), mp_real(t1)},
                           {mp_real(re0), mp_real(t1)}};
        const auto& gl = gauss_legendre(8);
        mp_complex acc(mp_real(0));
        for (int e = 0; e < 4; ++e) {
            const mp_complex a = c[e], b = c[(e + 1) % 4];
            const double len = to_double(abs(b - a));
            const double panel = (e % 2 == 0) ? 0.05 : 0.1;
            const int n = std::max(1, static_cast<int>(std::ceil(len / panel)));
            for (int j = 0; j < n; ++j) {
                mp_complex pa = a + (b - a) * mp_real(j) / mp_real(n);
                mp_complex half = (b - a) / mp_real(2 * n);
                for (unsigned i = 0; i < gl.x.size(); ++i) {
                    mp_complex s = pa + half * (mp_real(1) + gl.x[i]);
                    auto d = ev_.derivs(s);
                    acc += d[1] / d[0] * half * gl.w[i];
                }
            }
        }
        mp_complex w = acc / (2 * pi() * I);
        return w.real();
    }

    const LambdaEvaluator& ev() const { return ev_; }
    double step() const { return step_; }

private:
    bool edge_ok(double t) const {
        const double w = opt_.re_half_width;
        for (int i = 0; i <= 4; ++i) {
            mp_complex s(mp_real(0.5 - w + 2 * w * i / 4), mp_real(t));
            if (abs(ev_(s)) < mp_real(0.02) * ev_.unit(s)) return false;
        }
        return true;
    }

    mp_real refine(const mp_complex& pa, const mp_complex& va, const mp_complex& pb, const mp_complex& vb,
                   int depth) const {
        mp_real d = arg_of(vb / va);
        if (abs(d) < pi() / 4) return d;
        if (depth >= 14) throw InconclusiveError("scan_zeros: argument tracking did not settle");
        mp_complex pm = (pa + pb) / mp_real(2);
        mp_complex vm = ev_(pm);
        return refine(pa, va, pm, vm, depth + 1) + refine(pm, vm, pb, vb, depth + 1);
    }

    const LambdaEvaluator& ev_;
    double step_;
    ScanOptions opt_;
};

std::optional<mp_complex> newton(const LambdaEvaluator& ev, mp_complex s, const Box& box) {
    const mp_real stop = ldexp(mp_real(1), -static_cast<int>(ev.context().work_bits) / 3);
    for (int it = 0; it < 60; ++it) {
        auto d = ev.derivs(s);
        if (d[1] == mp_complex(mp_real(0))) return std::nullopt;
        mp_complex step = d[0] / d[1];
        s -= step;
        if (abs(s.real() - box.center.real()) > box.re_radius || abs(s.imag() - box.center.imag()) > box.im_radius)
            return std::nullopt;
        if (abs(step) < stop) return s;
    }
    return std::nullopt;
}

void scan_box(const Scanner& sc, double re0, double re1, double t0, double t1, int depth, int max_depth,
              std::vector<ZeroRecord>& out) {
    const LambdaEvaluator& ev = sc.ev();
    const PrecisionContext& ctx = ev.context();
    Box box{mp_complex(mp_real((re0 + re1) / 2), mp_real((t0 + t1) / 2)), mp_real((re1 - re0) / 2),
            mp_real((t1 - t0) / 2)};
    const mp_real wq = sc.winding_by_quadrature(re0, re1, t0, t1);
    const mp_real wr = round(wq);
    const bool integral = abs(wq - wr) < mp_real(0.05);
    int w = integral ? wr.convert_to<int>() : sc.winding_by_argument(re0, re1, t0, t1);
    if (integral && w == 0) return;

    if (!integral || w > 1) {
        if (depth < max_depth) {
            double tm = sc.safe_edge((t0 + t1) / 2);
            if (tm > t0 && tm < t1) {
                scan_box(sc, re0, re1, t0, tm, depth + 1, max_depth, out);
                scan_box(sc, re0, re1, tm, t1, depth + 1, max_depth, out);
                return;
            }
        }
        ZeroRecord z;
        z.rho = box.center;
        z.winding = w;
        z.box = box;
        z.tol_used = mp_real(ctx.tol) * ev.unit(z.rho);
        z.lambda_abs = abs(ev(z.rho));
        z.lambda_prime_abs = abs(ev(z.rho, 1));
        z.note = integral ? "multiple zeros not separated" : "winding quadrature not integral";
        out.push_back(z);
        return;
    }

    // one zero: start Newton from the smallest sample on the critical line
    std::vector<std::pair<mp_real, mp_complex>> starts;
    const int n = std::max(2, static_cast<int>(std::ceil((t1 - t0) / (sc.step() / 2))));
    for (int j = 0; j <= n; ++j) {
        mp_complex s(mp_real(0.5), mp_real(t0 + (t1 - t0) * j / n));
        starts.emplace_back(abs(ev(s)) / ev.unit(s), s);
    }
    std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ZeroRecord z;
    z.winding = 1;
    z.box = box;
    z.rho = box.center;
    bool found = false;
    for (std::size_t i = 0; i < std::min<std::size_t>(4, starts.size()) && !found; ++i) {
        if (auto r = newton(ev, starts[i].second, box)) {
            z.rho = *r;
            found = true;
        }
    }
    auto d = ev.derivs(z.rho);
    z.tol_used = mp_real(ctx.tol) * ev.unit(z.rho);
    z.lambda_abs = abs(d[0]);
    z.lambda_prime_abs = abs(d[1]);
    if (!found) {
        z.note = "Newton did not converge inside the box";
    } else if (z.lambda_abs > z.tol_used) {
        z.note = "residual above tolerance";
    } else if (z.lambda_prime_abs <= 10 * z.tol_used) {
        z.note = "derivative below certification threshold";
    } else {
        z.status = ZeroStatus::Simple;
    }
    out.push_back(z);
}

}  // namespace

int ScanReport::winding_sum() const {
    int s = 0;
    for (const auto& z : zeros) s += z.winding;
    return s;
}

ScanReport scan_zeros(const LambdaEvaluator& ev, double t0, double t1, double step, ScanOptions opt) {
    if (!(t1 > t0) || step <= 0) throw PreconditionError("scan_zeros: need t1 > t0 and step > 0");
    ScopedPrecision sp(ev.context());
    Scanner sc(ev, step, opt);
    const double re0 = 0.5 - opt.re_half_width, re1 = 0.5 + opt.re_half_width;
    std::vector<double> edges{sc.safe_edge(t0)};
    const int boxes = std::max(1, static_cast<int>(std::ceil((t1 - t0) / opt.box_height - 1e-9)));
    for (int j = 1; j < boxes; ++j) edges.push_back(sc.safe_edge(t0 + (t1 - t0) * j / boxes));
    edges.push_back(sc.safe_edge(t1));

    ScanReport r;
    r.t0 = t0;
    r.t1 = t1;
    for (std::size_t j = 0; j + 1 < edges.size(); ++j)
        if (edges[j + 1] > edges[j]) scan_box(sc, re0, re1, edges[j], edges[j + 1], 0, opt.max_depth, r.zeros);
    r.total_count_by_argument = sc.winding_by_argument(re0, re1, edges.front(), edges.back());
    return r;
}

ScanReport scan_zeros(const MaassForm& f, double t0, double t1, double step, const PrecisionContext& ctx,
                      ScanOptions opt) {
    LambdaEvaluator ev(f, ctx);
    return scan_zeros(ev, t0, t1, step, opt);
}

ScanReport merge_reports(std::vector<ScanReport> parts) {
    ScanReport r;
    if (parts.empty()) return r;
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.t0 < b.t0; });
    r.t0 = parts.front().t0;
    r.t1 = parts.back().t1;
    for (auto& p : parts) {
        r.total_count_by_argument += p.total_count_by_argument;
        for (auto& z : p.zeros) r.zeros.push_back(std::move(z));
    }
    return r;
}

namespace {

// fixed decimals, so values below the last place print as zero rather than as noise
std::string fixed(const mp_real& x, int places) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(places);
    os << x;
    std::string s = os.str();
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

nlohmann::ordered_json zero_json(const ZeroRecord& z) {
    return {{"t", fixed(z.rho.imag(), 15)},
            {"re_offset", fixed(z.rho.real() - mp_real(0.5), 12)},
            {"winding", z.winding},
            {"lambda_prime_abs", to_string(z.lambda_prime_abs, 10)},
            {"tol", to_string(z.tol_used, 6)},
            {"status", z.simple() ? "simple" : "inconclusive"}};
}

}  // namespace

void write_jsonl(std::ostream& out, const ScanReport& r) {
    for (const auto& z : r.zeros) out << zero_json(z).dump() << '\n';
    nlohmann::ordered_json s = {{"summary", true},
                        {"window", {r.t0, r.t1}},
                        {"total_count_by_argument", r.total_count_by_argument},
                        {"winding_sum", r.winding_sum()}};
    out << s.dump() << '\n';
}

void write_csv(std::ostream& out, const ScanReport& r) {
    out << "t,re_offset,winding,lambda_prime_abs,tol,status\n";
    for (const auto& z : r.zeros) {
        auto j = zero_json(z);
        out << j["t"].get<std::string>() << ',' << j["re_offset"].get<std::string>() << ',' << z.winding << ','
            << j["lambda_prime_abs"].get<std::string>() << ',' << j["tol"].get<std::string>() << ','
            << j["status"].get<std::string>() << '\n';
    }
}

void write_text(std::ostream& out, const ScanReport& r) {
    out << "window [" << r.t0 << ", " << r.t1 << "]: " << r.zeros.size() << " zero records, winding sum "
        << r.winding_sum() << ", argument count " << r.total_count_by_argument << '\n';
    for (const auto& z : r.zeros) {
        out << "  t = " << fixed(z.rho.imag(), 15) << "  re offset " << fixed(z.rho.real() - mp_real(0.5), 12)
            << "  winding " << z.winding << "  |Lambda'| = " << to_string(z.lambda_prime_abs, 6) << "  tol " << to_string(z.tol_used, 3) << "  "
            << (z.simple() ? "simple" : "inconclusive: " + z.note) << '\n';
    }
}

// ---------------------------------------------------------------------------------------------
// residue of Delta at a simple zero

ResidueResult residue_check(const TripleFn& fn, const mp_complex& rho, const mp_real& r, unsigned M,
                            const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    const mp_real tp = 2 * pi();
    {
        const unsigned K = 4 * M;
        mp_complex prev = fn(rho + 2 * r)[0];
        mp_real total = 0;
        for (unsigned j = 1; j <= K; ++j) {
            mp_complex cur = fn(rho + 2 * r * std::polar(mp_real(1), tp * j / K))[0];
            total += arg_of(cur / prev);
            prev = cur;
        }
        if (abs(total / tp - 1) > mp_real(0.05)) throw IsolationError("residue_check: zero not isolated within 2r");
    }
    ResidueResult res;
    res.radius = r;
    res.points = M;
    mp_complex acc(mp_real(0));
    for (unsigned j = 0; j < M; ++j) {
        mp_complex e = std::polar(mp_real(1), tp * j / M);
        auto d = fn(rho + r * e);
        acc += (d[2] - d[1] * d[1] / d[0]) * (r * e);
    }
    res.integral = acc / mp_real(M);
    res.expected = -fn(rho)[1];
    res.residual = abs(res.integral - res.expected) / abs(res.expected);
    return res;
}

ResidueResult delta_residue_check(const LambdaEvaluator& ev, const ZeroRecord& zero, unsigned M) {
    if (!zero.simple()) throw PreconditionError("delta_residue_check: zero is not certified simple");
    ScopedPrecision sp(ev.context());
    const Box& b = zero.box;
    mp_real room = mp_min(b.re_radius - abs(zero.rho.real() - b.center.real()),
                          b.im_radius - abs(zero.rho.imag() - b.center.imag()));
    mp_real r = room * mp_real(0.4);
    TripleFn fn = [&](const mp_complex& s) { return ev.derivs(s); };
    return residue_check(fn, zero.rho, r, M, ev.context());
}

// ---------------------------------------------------------------------------------------------
// Taylor expansion of the dual side

TaylorResult taylor_residuals(const MaassForm& f, const mpq& alpha, const mp_real& y, unsigned T_max,
                              const PrecisionContext& ctx) {
    if (alpha == 0) throw PreconditionError("taylor_residual: alpha must be nonzero");
    if (T_max == 0) throw PreconditionError("taylor_residual: T must be positive");
    ScopedPrecision sp(ctx);
    const mp_real a_real = mp_real(alpha.convert_to<mp_real>());
    if (y <= 0 || y > abs(a_real) / 2) throw PreconditionError("taylor_residual: need 0 < y <= |alpha|/2");

    const MaassForm fd = dual_form(f);
    const FormParams p = FormParams::of(f), pd = FormParams::of(fd);
    const mp_real N(f.level);
    const std::int64_t X = std::min<std::int64_t>(fd.coeff_bound, 2000);
    const auto c = c_coeffs(fd, X);

    TaylorResult res;
    // left side
    {
        FormEvaluator ev(fd, c.values, mp_real(2), ctx);
        const mp_complex z(a_real, y);
        const mp_complex w = -mp_complex(mp_real(1)) / (N * z);
        res.lhs = ev(w.real(), w.imag()).value;
        if (f.weight == 1) res.lhs *= I * abs(z) / z;
    }

    // right side: Mellin-Barnes integrals on Re s = sigma, shifted right of 2 while P_f has no poles
    mp_real sigma = 2;
    while (tail_bound(CoeffKind::C, X, sigma) > mp_real(ctx.tol) * mp_real(1e-3)) {
        sigma += mp_real(0.5);
        if (sigma > 16) throw ConvergenceError("taylor_residual: D series tail too large", 0);
    }
    res.contour = sigma;
    const mpq beta = -mpq(1) / (mpq(f.level) * alpha);
    const TrigTable trig0(beta, 0), trig1(beta, 1);
    const mp_real Xr = y / (N * a_real * a_real), logX = log(Xr);
    const mp_real R = abs(p.nu.imag()) + abs(p.nu.real());
    const mp_real h(0.1);
    const int K = static_cast<int>(ceil((R + 40) / h).convert_to<double>());

    std::vector<mp_complex> cw0(X + 1), cw1(X + 1), z(X + 1), rot(X + 1);
    std::vector<mp_real> ln(X + 1);
    for (std::int64_t n = 1; n <= X; ++n) {
        ln[n] = log(mp_real(n));
        cw0[n] = c.values[n] * trig0(n);
        cw1[n] = c.values[n] * trig1(n);
        z[n] = std::polar(exp(-sigma * ln[n]), (h * K) * ln[n]);  // n^{-s} at tau = -K h
        rot[n] = std::polar(mp_real(1), -h * ln[n]);
    }
    std::vector<mp_complex> tw(T_max);  // (2 pi i N alpha)^t / t!
    {
        const mp_complex base = 2 * pi() * I * N * a_real;
        mp_complex acc(mp_real(1));
        for (unsigned t = 0; t < T_max; ++t) {
            tw[t] = acc;
            acc *= base / mp_real(t + 1);
        }
    }
    std::vector<std::vector<mp_real>> npow(T_max, std::vector<mp_real>(X + 1));  // n^{-t}
    for (unsigned t = 0; t < T_max; ++t)
        for (std::int64_t n = 1; n <= X; ++n) npow[t][n] = exp(-mp_real(t) * ln[n]);
    std::vector<mp_complex> sums(T_max, mp_complex(mp_real(0)));
    const mp_complex ia[2] = {mp_complex(mp_real(1)), -I};  // i^{-a}
    std::vector<std::array<mp_complex, 2>> D(T_max);
    for (int j = -K; j <= K; ++j) {
        const mp_complex s(sigma, h * j);
        for (auto& d : D) d.fill(mp_complex(mp_real(0)));
        for (std::int64_t n = 1; n <= X; ++n) {
            const mp_complex u0 = cw0[n] * z[n], u1 = cw1[n] * z[n];
            for (unsigned t = 0; t < T_max; ++t) {
                D[t][0] += u0 * npow[t][n];
                D[t][1] += u1 * npow[t][n];
            }
            z[n] *= rot[n];
        }
        const mp_complex xs = std::polar(exp((mp_real(0.5) - sigma) * logX), -(h * j) * logX);
        for (unsigned t = 0; t < T_max; ++t) {
            mp_complex term(mp_real(0));
            for (int a = 0; a < 2; ++a) {
                mp_complex P = p_factor(p, s, a + static_cast<int>(t), t, ctx);
                if (P == mp_complex(mp_real(0))) continue;
                term += ia[a] * P * gamma_factor(pd, a == 0 ? 1 : -1, s + mp_real(t), ctx) * D[t][a];
            }
            sums[t] += tw[t] * term * xs;
        }
    }
    mp_complex pre = h / (2 * pi());
    if (f.weight == 1) pre *= a_real > 0 ? I : -I;
    mp_complex acc(mp_real(0));
    for (unsigned t = 0; t < T_max; ++t) {
        acc += pre * sums[t];
        res.partial.push_back(acc);
        res.residual.push_back(abs(res.lhs - acc));
    }
    return res;
}

mp_real taylor_residual(const MaassForm& f, const mpq& alpha, const mp_real& y, unsigned T,
                        const PrecisionContext& ctx) {
    return taylor_residuals(f, alpha, y, T, ctx).residual.back();
}

// ---------------------------------------------------------------------------------------------
// A(z)

AValue a_eval_contour(const LambdaEvaluator& ev, const mpq& alpha, const mp_real& y) {
    const PrecisionContext& ctx = ev.context();
    ScopedPrecision sp(ctx);
    if (y <= 0) throw PreconditionError("a_eval: y must be positive");
    const FormParams& p = ev.params();
    const mp_real omega = mp_real(alpha.convert_to<mp_real>()) / y;
    const mp_real logy = log(y);
    auto integrand = [&](const mp_real& tau) {
        const mp_complex s(mp_real(0.5), tau);
        mp_complex phi = trigamma(s + p.nu, ctx) + trigamma(s - p.nu, ctx);
        return phi * h_hyp(p, s, omega, ctx) * ev(s) * std::polar(mp_real(1), -tau * logy);
    };
    // the integrand decays like |gamma^+ H Phi|; cut where that envelope is negligible, since the
    // computed Lambda has an absolute floor far out on the line
    const mp_real cut = mp_real(ctx.tol) * v_scale(p) * mp_real(1e-3);
    auto envelope = [&](const mp_real& tau) {
        const mp_complex s(mp_real(0.5), tau);
        mp_complex phi = trigamma(s + p.nu, ctx) + trigamma(s - p.nu, ctx);
        return ev.unit(s) * abs(h_hyp(p, s, omega, ctx) * phi) * 10;
    };
    mp_real tmax = abs(p.nu.imag()) + 5;
    while (envelope(tmax) > cut || envelope(-tmax) > cut) {
        tmax += 5;
        if (tmax > 2000) throw ConvergenceError("a_eval: contour integrand does not decay", 0);
    }
    // trigamma(s -+ nu) peaks at distance 1/2 from the line; 12-point panels of width 1/2 resolve it
    const auto& gl = gauss_legendre(12);
    const int panels = static_cast<int>(ceil(4 * tmax).convert_to<double>());
    const mp_real width = 2 * tmax / panels, half = width / 2;
    mp_complex acc(mp_real(0));
    for (int j = 0; j < panels; ++j) {
        const mp_real mid = -tmax + width * j + half;
        for (unsigned i = 0; i < gl.x.size(); ++i) acc += integrand(mid + half * gl.x[i]) * (half * gl.w[i]);
    }
    return {acc / (2 * pi()), cut * tmax};
}

AValue a_eval(const MaassForm& f, const mpq& alpha, const mp_real& y, ARep rep, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    if (y <= 0) throw PreconditionError("a_eval: y must be positive");
    if (rep == ARep::Contour) return a_eval_contour(LambdaEvaluator(f, ctx), alpha, y);
    const mp_real a_real = mp_real(alpha.convert_to<mp_real>());
    FormEvaluator F(f, ctx);
    const mp_complex nu = f.nu;
    ComplexFn g = [&](const mp_real& d) {
        mp_real x = 1 + d;
        return phi_kernel(nu, log(x)) / x * F(x * a_real, x * y).value;
    };
    QuadOptions opt;
    opt.relative = true;
    opt.err_scale = mp_real(ctx.tol) * v_scale(FormParams::of(f));
    auto q = quad_half_line(g, mp_real(0), ctx, opt);
    return {q.value, q.error + mp_real(ctx.tol) * v_scale(FormParams::of(f))};
}

}  // namespace ltwist
