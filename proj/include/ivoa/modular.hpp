#pragma once
// Verification layer: modular differential equation residuals, the
// second-order equation in theta = q d/dq form, T-phases, numeric S-matrix
// checks, decomposition into degree-d polynomials in the two Rogers-
// Ramanujan characters, and the closed-form dimension formulas.

#include <ivoa/characters.hpp>
#include <ivoa/errors.hpp>
#include <ivoa/qseries.hpp>
#include <ivoa/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace ivoa {

// ---------------------------------------------------------------------------
// Differential equations
// ---------------------------------------------------------------------------

// theta^2 f + 2 E_2 theta f + gamma E_4 f with the series-normalized
// Eisenstein series E_2 = -1/12 + 2 sum sigma_1 q^n, E_4 = 1/720 + ...
struct MDESpec {
    Rat e4_coefficient;  // gamma
    Rat mu;              // bookkeeping: gamma = -180 mu for the pinned sign convention
};

inline MDESpec mde_spec_from_mu(const Rat& mu) { return {Rat(-180) * mu, mu}; }

namespace detail {
// Restrict a residual to the absolute exponent window [*, base + n].  The
// residual's canonical offset can sit above base when leading terms cancel,
// so truncation has to be anchored at the input's leading exponent.
inline QSeries clip_to_window(const QSeries& res, const Rat& base, int n) {
    if (res.is_zero()) return QSeries::zero(n);
    const Rat rel = base + n - res.offset();
    if (rel < 0) return QSeries::zero(n);  // residual opens past the window
    const long long k = to_ll(floor_int(rel));
    if (k >= res.order()) return res;
    return res.truncated(static_cast<int>(k));
}
}  // namespace detail

inline QSeries mde_residual(const QSeries& f, const MDESpec& spec, int n) {
    if (n < 0) throw DomainViolation("order must be nonnegative");
    if (f.order() < n)
        throw InsufficientOrder("series order too small for the requested residual order");
    const QSeries t1 = theta_derivative(f);
    const QSeries t2 = theta_derivative(t1);
    const QSeries e2 = eisenstein(2, n + 1);
    const QSeries e4 = eisenstein(4, n + 1);
    const QSeries res = t2 + Rat(2) * (e2 * t1) + spec.e4_coefficient * (e4 * f);
    return detail::clip_to_window(res, f.offset(), n);
}

// theta^2 g - ((k+1)/6) E2h theta g + (k(k+1)/12) (theta E2h) g where E2h is
// the unit-normalized quasimodular form 1 - 24 sum sigma_1 q^n (= -12 E_2).
inline QSeries kz_residual(const QSeries& g, const Rat& k, int n) {
    if (n < 0) throw DomainViolation("order must be nonnegative");
    if (g.order() < n)
        throw InsufficientOrder("series order too small for the requested residual order");
    const QSeries e2h = Rat(-12) * eisenstein(2, n + 1);
    const QSeries t1 = theta_derivative(g);
    const QSeries t2 = theta_derivative(t1);
    const QSeries res =
        t2 - ((k + 1) / 6) * (e2h * t1) + (k * (k + 1) / 12) * (theta_derivative(e2h) * g);
    return detail::clip_to_window(res, g.offset(), n);
}

// ---------------------------------------------------------------------------
// Modular transformations
// ---------------------------------------------------------------------------

// Under tau -> tau + 1 a series supported on a + Z picks up the phase
// e^{2 pi i a}.  Keeps the leading exponent when it already lies in (-1, 1],
// otherwise reduces mod 1 into (-1/2, 1/2].
inline Rat t_phase(const QSeries& f) {
    if (f.is_zero()) throw ZeroSeries("t-phase of the zero series is undefined");
    const Rat a = f.offset();
    if (a > Rat(-1) && a <= Rat(1)) return a;
    Rat r = a - Rat(floor_int(a));  // [0, 1)
    if (r > rat(1, 2)) r -= 1;
    return r;
}

// Checks | Z_i(-1/tau0) - sum_j S_ij Z_j(tau0) | < tol for every row at
// tau0 = i*t, evaluating each member truncated to order n with eval_numeric
// at q = e^{-2 pi t} and qhat = e^{-2 pi / t}.  Truncation-tail bounds above
// tol/2 raise InsufficientPrecision instead of producing a misleading verdict.
inline bool s_check_numeric(const std::vector<QSeries>& family,
                            const std::vector<std::vector<double>>& s_matrix, double t, int n,
                            double tol) {
    const size_t m = family.size();
    if (m == 0) throw DomainViolation("family must be nonempty");
    if (!(t > 0)) throw DomainViolation("the sample point i*t needs t > 0");
    if (!(tol > 0)) throw DomainViolation("tolerance must be positive");
    if (s_matrix.size() != m) throw DimensionMismatch("S-matrix rows do not match the family size");
    for (const auto& row : s_matrix)
        if (row.size() != m) throw DimensionMismatch("S-matrix columns do not match the family size");

    const double q = std::exp(-2.0 * M_PI * t);
    const double qhat = std::exp(-2.0 * M_PI / t);
    std::vector<EvalResult> at_tau(m), at_stau(m);
    for (size_t i = 0; i < m; ++i) {
        const QSeries zi = family[i].truncated(n);
        at_tau[i] = eval_numeric(zi, q);
        at_stau[i] = eval_numeric(zi, qhat);
    }
    for (size_t i = 0; i < m; ++i) {
        double bound = at_stau[i].tail_bound;
        for (size_t j = 0; j < m; ++j) bound += std::abs(s_matrix[i][j]) * at_tau[j].tail_bound;
        if (!(bound <= tol / 2))
            throw InsufficientPrecision("truncation tail " + std::to_string(bound) +
                                        " exceeds half the tolerance; raise the series order");
    }
    for (size_t i = 0; i < m; ++i) {
        double rhs = 0.0;
        for (size_t j = 0; j < m; ++j) rhs += s_matrix[i][j] * at_tau[j].value;
        if (!(std::abs(at_stau[i].value - rhs) < tol)) return false;
    }
    return true;
}

// The S-matrices of the three built-in character families (entries derived
// from the closed sine forms, 30-digit decimals).
namespace detail {
inline constexpr double kSinPi5 = 0.587785252292473129168705954639;   // sin(pi/5)
inline constexpr double kSin2Pi5 = 0.951056516295153572116439333379;  // sin(2 pi/5)
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362105;
inline constexpr double kTwoInvSqrt5 = 0.894427190999915878563669467493;
inline constexpr double kSqrt2Over5 = 0.632455532033675866399778708888;
}  // namespace detail

// family (v-e7, v-e7-w2)
inline std::vector<std::vector<double>> s_matrix_v_e7_pair() {
    const double a = detail::kInvSqrt2;
    return {{a, a}, {a, -a}};
}

// family (v-e712, v-e712-a1)
inline std::vector<std::vector<double>> s_matrix_v_e712_pair() {
    const double c = detail::kTwoInvSqrt5;
    return {{c * detail::kSin2Pi5, c * detail::kSinPi5}, {c * detail::kSinPi5, -c * detail::kSin2Pi5}};
}

// family (vir-m35-0, vir-m35-34, vir-m35-15, vir-m35-m120)
inline std::vector<std::vector<double>> s_matrix_vir_m35() {
    const double c = detail::kSqrt2Over5;
    const double s1 = c * detail::kSinPi5, s2 = c * detail::kSin2Pi5;
    return {{s2, -s2, -s1, s1}, {-s2, -s2, s1, s1}, {-s1, s1, -s2, s2}, {s1, s1, s2, s2}};
}

// An S-matrix together with the T-phases of the same ordered family.
struct TransformMatrices {
    std::vector<std::vector<double>> s_matrix;
    std::vector<Rat> t_phases;  // each in (-1, 1]
};

inline TransformMatrices transform_matrices_v_e7_pair() {
    return {s_matrix_v_e7_pair(), {rat(-7, 24), rat(11, 24)}};
}

inline TransformMatrices transform_matrices_v_e712_pair() {
    return {s_matrix_v_e712_pair(), {rat(-19, 60), rat(29, 60)}};
}

inline TransformMatrices transform_matrices_vir_m35() {
    return {s_matrix_vir_m35(), {rat(1, 40), rat(31, 40), rat(9, 40), rat(-1, 40)}};
}

// ---------------------------------------------------------------------------
// Polynomial decomposition in the two Rogers-Ramanujan characters
// ---------------------------------------------------------------------------

// Writes f as sum_i c_i p1^i p2^{degree-i} where p1 = rr-vac (leading
// exponent -1/60) and p2 = rr-mod (leading exponent 11/60).  The monomial
// p1^i p2^{degree-i} opens at (11 degree - 12 i)/60; only exponent-compatible
// i are admissible, and their leading exponents differ pairwise, so the
// system is triangular.  Returns (i, c_i) with c_i != 0, i descending.
inline std::vector<std::pair<int, Rat>> rr_decompose(const QSeries& f, int degree) {
    if (degree < 0) throw DomainViolation("degree must be nonnegative");
    if (f.is_zero()) throw ZeroSeries("cannot decompose the zero series");
    const int n = static_cast<int>(f.order());

    std::vector<int> admissible;  // ascending offset = descending i
    for (int i = degree; i >= 0; --i) {
        Rat off = rat(11 * degree - 12 * i, 60);
        if (is_integer(off - f.offset())) admissible.push_back(i);
    }
    if (admissible.empty())
        throw NoAdmissibleMonomials("no monomial of degree " + std::to_string(degree) +
                                    " matches the leading-exponent class of the series");

    const QSeries p1 = builtin_character("rr-vac", n);
    const QSeries p2 = builtin_character("rr-mod", n);
    std::vector<QSeries> pow1(static_cast<size_t>(degree) + 1, QSeries::one(n));
    std::vector<QSeries> pow2(static_cast<size_t>(degree) + 1, QSeries::one(n));
    for (int i = 1; i <= degree; ++i) {
        pow1[static_cast<size_t>(i)] = pow1[static_cast<size_t>(i) - 1] * p1;
        pow2[static_cast<size_t>(i)] = pow2[static_cast<size_t>(i) - 1] * p2;
    }

    QSeries residual = f;
    std::vector<std::pair<int, Rat>> out;
    for (int i : admissible) {
        const QSeries mono = pow1[static_cast<size_t>(i)] * pow2[static_cast<size_t>(degree - i)];
        if (residual.is_zero()) continue;
        const Rat c = residual.coeff_at(mono.offset());  // monomials are monic
        if (c == 0) continue;
        residual = residual - c * mono;
        out.emplace_back(i, c);
    }
    if (!residual.is_zero()) {
        const Rat bad = residual.offset();
        throw InconsistentSystem("series is not in the span: first failing coefficient " +
                                 rat_str(residual.coeffs().front()) + " at exponent " + rat_str(bad));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form dimension formulas
// ---------------------------------------------------------------------------

inline Rat deligne_dim(const Rat& hv) {
    if (hv == Rat(-6)) throw PoleAtInput("dimension formula has a pole at -6");
    return Rat(2) * (Rat(5) * hv - 6) * (hv + 1) / (hv + 6);
}

inline Rat deligne_dim2(const Rat& hv) {
    if (hv == Rat(-6) || hv == Rat(-12))
        throw PoleAtInput("second dimension formula has poles at -6 and -12");
    return Rat(5) * hv * hv * (Rat(2) * hv + 3) * (Rat(5) * hv - 6) / ((hv + 6) * (hv + 12));
}

// x = sqrt(1 + 36 mu) = 1 + c/2, solved over the rationals.
inline Rat mu_to_c(const Rat& mu) {
    const Rat disc = Rat(1) + Rat(36) * mu;
    if (disc < 0)
        throw NonSquareDiscriminant("1 + 36 mu is negative at mu = " + rat_str(mu));
    const Int num = disc.get_num(), den = disc.get_den();
    const Int rn = isqrt(num), rd = isqrt(den);
    if (rn * rn != num || rd * rd != den)
        throw NonSquareDiscriminant("1 + 36 mu is not a rational square at mu = " + rat_str(mu));
    Rat x(rn, rd);
    x.canonicalize();
    return Rat(2) * (x - 1);
}

// One row per member of the dimension series: dual Coxeter number, Lie
// algebra dimension, central charge c = dim/(1 + hv), module weight
// h = hv/(hv + 6), and mu with c = 2(sqrt(1+36 mu) - 1).
struct DeligneRow {
    Rat hv;
    Rat dim;
    Rat c;
    Rat h;
    Rat mu;
};

inline std::vector<DeligneRow> deligne_table() {
    std::vector<DeligneRow> rows;
    const Rat hvs[] = {rat(3, 2), Rat(2), Rat(3), Rat(4),  Rat(6),
                       Rat(9),    Rat(12), Rat(18), Rat(24), Rat(30)};
    for (const Rat& hv : hvs) {
        const Rat dim = deligne_dim(hv);
        const Rat c = dim / (Rat(1) + hv);
        const Rat h = hv / (hv + 6);
        const Rat mu = c * (Rat(4) + c) / 144;
        rows.push_back({hv, dim, c, h, mu});
    }
    return rows;
}

}  // namespace ivoa
