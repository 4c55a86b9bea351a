#pragma once

#include "ltwist/analytic.hpp"

#include <array>
#include <functional>
#include <memory>
#include <ostream>

namespace ltwist {

// Completed L-function by the split Mellin integral of the kernel
//   Theta(y) = sum lambda(n)/sqrt(n) W(ny),  W = V^+ (or u V^-(u) for k = 0, eps = -1),
// with Theta(y) = eta eps^{1-k} Theta_bar(1/(Ny)).
class LambdaEvaluator {
public:
    // Split height y0; defaults to 1/sqrt(N).
    LambdaEvaluator(const MaassForm& f, const PrecisionContext& ctx, std::optional<mp_real> y0 = std::nullopt);

    mp_complex operator()(const mp_complex& s, unsigned order = 0) const;
    // Lambda, Lambda', Lambda'' in one pass.
    std::array<mp_complex, 3> derivs(const mp_complex& s) const;

    // |gamma^+(s)|: converts Lambda to L-sized units.
    mp_real unit(const mp_complex& s) const;

    const MaassForm& form() const { return f_; }
    const FormParams& params() const { return params_; }
    const PrecisionContext& context() const { return ctx_; }
    const mp_real& split() const { return y0_; }
    mp_complex root_factor() const { return root_; }  // eta eps^{1-k}

private:
    struct Side {
        std::vector<mp_real> u;       // log y at the nodes
        std::vector<mp_complex> wth;  // weight * Theta(y)
    };
    static Side build(const MaassForm& g, const mp_real& lo, const mp_real& hi, const PrecisionContext& ctx);

    MaassForm f_;
    FormParams params_;
    PrecisionContext ctx_;
    mp_real y0_, logN_;
    mp_complex root_;
    std::shared_ptr<const Side> near_;  // f on [y0, ymax]
    std::shared_ptr<const Side> far_;   // f_bar on [1/(N y0), ymax]
};

mp_complex lambda_complete(const MaassForm& f, const mp_complex& s, const PrecisionContext& ctx);
mp_complex lambda_derivs(const MaassForm& f, const mp_complex& s, unsigned order, const PrecisionContext& ctx);

struct FunctionalEquationResult {
    mp_complex lhs, rhs;
    mp_real residual;  // |lhs - rhs| in units of |gamma^+(s)|
};

// Lambda_f(s) against eta eps^{1-k} N^{1/2-s} Lambda_fbar(1-s); `dual` should use a different split.
FunctionalEquationResult fe_residual(const LambdaEvaluator& ev, const LambdaEvaluator& dual, const mp_complex& s);
FunctionalEquationResult fe_residual(const MaassForm& f, const mp_complex& s, const PrecisionContext& ctx);

// Delta_f(s) + (psi_f'(s) - psi_fbar'(1-s)) Lambda_f(s) against eta eps^{1-k} N^{1/2-s} Delta_fbar(1-s),
// in units of |gamma^+(s)| max(1, |psi_f'(s)|). Throws NearZeroError near zeros of Lambda.
FunctionalEquationResult feofd_residual(const LambdaEvaluator& ev, const LambdaEvaluator& dual, const mp_complex& s);
FunctionalEquationResult feofd_residual(const MaassForm& f, const mp_complex& s, const PrecisionContext& ctx);

// (1/2 pi i) oint Lambda(w)/(w-s)^2 dw on |w - s| = r with M trapezoid points.
mp_complex cauchy_derivative(const LambdaEvaluator& ev, const mp_complex& s, const mp_real& r, unsigned M);

struct Box {
    mp_complex center;
    mp_real re_radius, im_radius;
};

enum class ZeroStatus { Simple, Inconclusive };

struct ZeroRecord {
    mp_complex rho;
    int winding = 0;
    mp_real lambda_prime_abs;
    mp_real lambda_abs;
    Box box;
    mp_real tol_used;
    ZeroStatus status = ZeroStatus::Inconclusive;
    std::string note;
    bool simple() const { return status == ZeroStatus::Simple; }
};

struct ScanReport {
    double t0 = 0, t1 = 0;
    std::vector<ZeroRecord> zeros;
    int total_count_by_argument = 0;
    int winding_sum() const;
};

struct ScanOptions {
    double re_half_width = 0.1;
    double box_height = 1.0;
    int max_depth = 6;
};

ScanReport scan_zeros(const LambdaEvaluator& ev, double t0, double t1, double step, ScanOptions opt = {});
ScanReport scan_zeros(const MaassForm& f, double t0, double t1, double step, const PrecisionContext& ctx,
                      ScanOptions opt = {});
// Merges reports of adjacent windows scanned separately.
ScanReport merge_reports(std::vector<ScanReport> parts);

void write_jsonl(std::ostream& out, const ScanReport& r);
void write_csv(std::ostream& out, const ScanReport& r);
void write_text(std::ostream& out, const ScanReport& r);

using TripleFn = std::function<std::array<mp_complex, 3>(const mp_complex&)>;

struct ResidueResult {
    mp_complex integral;  // (1/2 pi i) oint F (log F)'' ds
    mp_complex expected;  // -F'(rho)
    mp_real residual;     // |integral - expected| / |expected|
    mp_real radius;
    unsigned points = 0;
};

// `fn` returns (F, F', F''). Throws IsolationError unless F winds once on |s - rho| = 2r.
ResidueResult residue_check(const TripleFn& fn, const mp_complex& rho, const mp_real& r, unsigned M,
                            const PrecisionContext& ctx);
ResidueResult delta_residue_check(const LambdaEvaluator& ev, const ZeroRecord& zero, unsigned M = 64);

struct TaylorResult {
    mp_complex lhs;
    std::vector<mp_complex> partial;  // right side with T = 1, 2, ...
    std::vector<mp_real> residual;    // |lhs - partial[T-1]|
    mp_real contour;                  // abscissa actually used
};

// (i|z|/z)^k F_bar(-1/(Nz)) against the T-term Mellin-Barnes expansion, for T = 1..T_max.
TaylorResult taylor_residuals(const MaassForm& f, const mpq& alpha, const mp_real& y, unsigned T_max,
                              const PrecisionContext& ctx);
mp_real taylor_residual(const MaassForm& f, const mpq& alpha, const mp_real& y, unsigned T,
                        const PrecisionContext& ctx);

enum class ARep { Series, Contour };

struct AValue {
    mp_complex value;
    mp_real error;
};

// A(alpha + iy) = int_1^inf phi(x) F(x(alpha + iy)) dx / x.
AValue a_eval(const MaassForm& f, const mpq& alpha, const mp_real& y, ARep rep, const PrecisionContext& ctx);
AValue a_eval_contour(const LambdaEvaluator& ev, const mpq& alpha, const mp_real& y);

}  // namespace ltwist
