#pragma once
// Graded dimensions of lattice cosets with restricted directions, and the
// built-in character catalogue assembled from them.
//
// A ChargeConfig splits the lattice basis into r "restricted" directions
// (coordinates in Z>=0, each weighted by 1/(q)_{k_i}), s "free" directions
// (coordinates in Z, jointly weighted by 1/phi(q)^s), and rank-r-s trailing
// directions pinned to zero, together with a rational shift vector l.  The
// graded dimension is
//
//     sum over admissible k of  q^{Q(k + l)/2} / ((q)_{k_1} ... (q)_{k_r} * phi(q)^s)
//
// reported from its true leading exponent and valid through relative order N.

#include <ivoa/errors.hpp>
#include <ivoa/lattice.hpp>
#include <ivoa/qseries.hpp>
#include <ivoa/rational.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ivoa {

struct ChargeConfig {
    ChargeConfig(GramLattice lat, int r, int s, std::vector<Rat> l)
        : lattice(std::move(lat)), restricted(r), heisenberg(s), shift(std::move(l)) {
        if (restricted < 0 || heisenberg < 0 || restricted + heisenberg > lattice.rank())
            throw DomainViolation("restricted + heisenberg coordinate counts exceed the lattice rank");
        if (static_cast<int>(shift.size()) != lattice.rank())
            throw DimensionMismatch("shift length does not match lattice rank");
    }

    GramLattice lattice;
    int restricted;   // r: leading coordinates, domain Z>=0, Pochhammer-weighted
    int heisenberg;   // s: next coordinates, domain Z, free-boson weighted
    std::vector<Rat> shift;

    int fixed_zero() const { return lattice.rank() - restricted - heisenberg; }
};

namespace detail {

// With trailing coordinates pinned to zero, the exponent splits as
//   Q(k + l)/2 = Q'(k' + t)/2 + c0/2
// over the leading (r+s)-dimensional sublattice Q', where t = l' + A11^{-1} A12 l''
// and c0 = l''^T A22 l'' - (A11^{-1} A12 l'')^T A12 l''.
struct ReducedConfig {
    GramLattice sub;
    std::vector<Rat> center;
    Rat exponent_shift;  // c0 / 2
};

inline ReducedConfig reduce_config(const ChargeConfig& cfg) {
    const int n = cfg.lattice.rank();
    const int m = cfg.restricted + cfg.heisenberg;
    if (m == n) return {cfg.lattice, cfg.shift, Rat(0)};
    const auto& A = cfg.lattice.gram();
    const auto& l = cfg.shift;
    std::vector<std::vector<Rat>> a11(static_cast<size_t>(m), std::vector<Rat>(static_cast<size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a11[static_cast<size_t>(i)][static_cast<size_t>(j)] = A[static_cast<size_t>(i)][static_cast<size_t>(j)];
    GramLattice sub(std::move(a11));

    std::vector<Rat> v(static_cast<size_t>(m), Rat(0));  // A12 * l''
    for (int i = 0; i < m; ++i)
        for (int j = m; j < n; ++j) v[static_cast<size_t>(i)] += A[static_cast<size_t>(i)][static_cast<size_t>(j)] * l[static_cast<size_t>(j)];
    std::vector<Rat> w(static_cast<size_t>(m), Rat(0));  // A11^{-1} * v
    const auto& inv = sub.inverse();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) w[static_cast<size_t>(i)] += inv[static_cast<size_t>(i)][static_cast<size_t>(j)] * v[static_cast<size_t>(j)];

    std::vector<Rat> center(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) center[static_cast<size_t>(i)] = l[static_cast<size_t>(i)] + w[static_cast<size_t>(i)];

    Rat c0(0);
    for (int i = m; i < n; ++i)
        for (int j = m; j < n; ++j) c0 += l[static_cast<size_t>(i)] * A[static_cast<size_t>(i)][static_cast<size_t>(j)] * l[static_cast<size_t>(j)];
    for (int i = 0; i < m; ++i) c0 -= w[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    return {std::move(sub), std::move(center), c0 / 2};
}

}  // namespace detail

// Core bucketed evaluation shared by the plain and filtered entry points.
// `keep` receives the restricted-coordinate key of each charge bucket and may
// drop it (used for parity-split checks).  The returned series is canonical
// and complete through absolute exponent >= Q(l)/2 + order; the plain entry
// point trims it to relative order `order`.
template <class Pred>
QSeries graded_dimension_if(const ChargeConfig& cfg, int order, Pred&& keep) {
    if (order < 0) throw DomainViolation("order must be nonnegative");
    const int r = cfg.restricted;
    if (r + cfg.heisenberg == 0) {
        // only k = 0 survives
        if (!keep(std::vector<long long>{})) return QSeries::zero(order);
        std::vector<Rat> c(static_cast<size_t>(order) + 1, Rat(0));
        c[0] = Rat(1);
        return QSeries(cfg.lattice.qform(cfg.shift) / 2, std::move(c));
    }

    const detail::ReducedConfig red = detail::reduce_config(cfg);
    const Rat bound = Rat(2 * order) + red.sub.qform(red.center);

    Rat base;               // exponent of slot 0, relative to exponent_shift
    long long slots = 0;    // number of complete slots
    std::map<std::vector<long long>, std::vector<long long>> buckets;

    if (red.sub.is_even_integral() && red.sub.has_integral_pairing(red.center)) {
        HalfNormBuckets hb = half_norm_buckets(red.sub, red.center, bound, r, /*nonneg*/ true);
        base = hb.exponent_base;
        slots = hb.slots;
        buckets = std::move(hb.buckets);
    } else {
        // Generic path: enumerate, filter the restricted coordinates by hand
        // and check that all exponents lie on a common integral grid.
        std::vector<std::pair<std::vector<long long>, Rat>> pts;
        enumerate_below(red.sub, red.center, bound, [&](const std::vector<long long>& k, const Rat& norm) {
            for (int i = 0; i < r; ++i)
                if (k[static_cast<size_t>(i)] < 0) return;
            pts.emplace_back(std::vector<long long>(k.begin(), k.begin() + r), norm / 2);
        });
        if (pts.empty()) return QSeries::zero(order);
        Rat emin = pts.front().second;
        for (const auto& p : pts) emin = std::min(emin, p.second);
        base = emin;
        slots = to_ll(floor_int(bound / 2 - emin)) + 1;
        for (const auto& p : pts) {
            Rat rel = p.second - emin;
            if (!is_integer(rel))
                throw DomainViolation("graded dimension exponents do not lie on an integral grid");
            long long slot = to_ll(rel.get_num());
            auto& cnt = buckets[p.first];
            if (cnt.empty()) cnt.assign(static_cast<size_t>(slots), 0);
            ++cnt[static_cast<size_t>(slot)];
        }
    }
    if (slots <= 0) return QSeries::zero(order);
    const int window = static_cast<int>(slots) - 1;

    QSeries total = QSeries::zero(window);
    const QSeries boson = euler_inv_pow(cfg.heisenberg, window);
    std::map<long long, QSeries> poch_cache;
    for (const auto& [key, cnt] : buckets) {
        if (!keep(key)) continue;
        std::vector<Rat> c;
        c.reserve(cnt.size());
        for (long long v : cnt) c.push_back(Rat(to_int(v)));
        QSeries term(Rat(0), std::move(c));
        if (term.is_zero()) continue;
        term = term * boson;
        for (long long kv : key) {
            auto it = poch_cache.find(kv);
            if (it == poch_cache.end())
                it = poch_cache.emplace(kv, pochhammer_inv(static_cast<int>(kv), window)).first;
            term = term * it->second;
        }
        total = total + term;
    }
    if (total.is_zero()) return QSeries::zero(std::min(order, window));
    QSeries result(red.exponent_shift + base + total.offset(), total.coeffs());
    return result.truncated(static_cast<int>(std::min<long long>(order, result.order())));
}

inline QSeries graded_dimension(const ChargeConfig& cfg, int order) {
    return graded_dimension_if(cfg, order, [](const std::vector<long long>&) { return true; });
}

// Single charge-grading summand q^{Q(k+l)/2} / ((q)_{k_1}...(q)_{k_r} phi^s).
// `k` lists the r+s free coordinates; pinned coordinates stay zero.
inline QSeries charge_component(const ChargeConfig& cfg, const std::vector<long long>& k, int order) {
    if (order < 0) throw DomainViolation("order must be nonnegative");
    const int m = cfg.restricted + cfg.heisenberg;
    if (static_cast<int>(k.size()) != m)
        throw DimensionMismatch("charge vector must list the restricted and free coordinates");
    for (int i = 0; i < cfg.restricted; ++i)
        if (k[static_cast<size_t>(i)] < 0)
            throw DomainViolation("restricted charge coordinates must be nonnegative");
    std::vector<Rat> x(cfg.shift);
    for (int i = 0; i < m; ++i) x[static_cast<size_t>(i)] += Rat(to_int(k[static_cast<size_t>(i)]));
    QSeries term = QSeries::monomial(cfg.lattice.qform(x) / 2, order);
    term = term * euler_inv_pow(cfg.heisenberg, order);
    for (int i = 0; i < cfg.restricted; ++i)
        term = term * pochhammer_inv(static_cast<int>(k[static_cast<size_t>(i)]), order);
    return term;
}

// chi' = q^{-Q(l)/2} * chi: the same series with every exponent lowered by
// the shift norm, so a minimal-norm shift opens at exponent 0.
inline QSeries chi_prime(const ChargeConfig& cfg, int order) {
    const QSeries gd = graded_dimension(cfg, order);
    return QSeries(gd.offset() - cfg.lattice.qform(cfg.shift) / 2, gd.coeffs());
}

// Multiplies by q^{h - c/24} exactly (c = 0, h = 0 is the identity).
inline QSeries assemble_character(const QSeries& f, const Rat& c, const Rat& h) {
    return QSeries(f.offset() + h - c / 24, f.coeffs());
}

// lhs == sum of pairwise products, compared through relative order n above
// the smallest leading exponent involved.
inline bool verify_product_identity(const QSeries& lhs,
                                    const std::vector<std::pair<QSeries, QSeries>>& terms, int n) {
    QSeries rhs = QSeries::zero(n);
    for (const auto& [a, b] : terms) rhs = rhs + a * b;
    return equal_to_order(lhs, rhs, n);
}

namespace detail {

// The four Nahm-type sums entering the c = -3/5 minimal-model characters:
//   1: sum_{k>=0} q^{k^2}   / (q)_{2k}      2: sum_{k>=0} q^{k^2+k} / (q)_{2k+1}
//   3: sum_{k>=1} q^{k^2}   / (q)_{2k-1}    4: sum_{k>=0} q^{k^2+k} / (q)_{2k}
inline QSeries m35_sum(int which, int order) {
    std::vector<Rat> out(static_cast<size_t>(order) + 1, Rat(0));
    for (long long k = (which == 3) ? 1 : 0;; ++k) {
        const long long e = (which == 1 || which == 3) ? k * k : k * k + k;
        if (e > order) break;
        long long pk = 0;
        switch (which) {
            case 1: pk = 2 * k; break;
            case 2: pk = 2 * k + 1; break;
            case 3: pk = 2 * k - 1; break;
            case 4: pk = 2 * k; break;
            default: throw DomainViolation("m35_sum: variant must be 1..4");
        }
        const QSeries pi = pochhammer_inv(static_cast<int>(pk), order - static_cast<int>(e));
        const auto& pc = pi.coeffs();
        for (size_t i = 0; i < pc.size(); ++i) out[static_cast<size_t>(e) + i] += pc[i];
    }
    return QSeries(Rat(0), std::move(out));
}

}  // namespace detail

// Catalogue of built-in characters, keyed by tag.  Each is returned valid
// through relative order `order`, with leading exponent h - c/24.
inline std::vector<std::string> character_tags() {
    return {"rr-vac",  "rr-mod",  "vir-m35-0",  "vir-m35-34", "vir-m35-15", "vir-m35-m120",
            "v-e7",    "v-e7-w2", "v-e8",       "v-e712",     "v-e712-a1"};
}

inline QSeries builtin_character(const std::string& tag, int order) {
    if (order < 0) throw DomainViolation("order must be nonnegative");
    if (tag == "rr-vac" || tag == "rr-mod") {
        const bool vac = (tag == "rr-vac");
        const ChargeConfig cfg(GramLattice::builtin("A1"), 1, 0, {vac ? Rat(0) : rat(1, 2)});
        return assemble_character(chi_prime(cfg, order), rat(2, 5), vac ? Rat(0) : rat(1, 5));
    }
    if (tag == "vir-m35-0" || tag == "vir-m35-34" || tag == "vir-m35-15" || tag == "vir-m35-m120") {
        int which = 0;
        Rat h;
        if (tag == "vir-m35-m120") { which = 1; h = rat(-1, 20); }
        else if (tag == "vir-m35-15") { which = 2; h = rat(1, 5); }
        else if (tag == "vir-m35-34") { which = 3; h = rat(3, 4); }
        else { which = 4; h = Rat(0); }
        // Variant 3 opens at q^1, absorbed into the assembled leading
        // exponent h - c/24; compute one slot deeper and rebase so the
        // canonical series still reaches relative order `order`.
        const QSeries sum = detail::m35_sum(which, which == 3 ? order + 1 : order);
        return assemble_character(QSeries(Rat(0), sum.coeffs()), rat(-3, 5), h);
    }
    if (tag == "v-e7" || tag == "v-e7-w2") {
        GramLattice e7 = GramLattice::builtin("E7");
        if (tag == "v-e7") {
            const ChargeConfig cfg(std::move(e7), 0, 7, std::vector<Rat>(7, Rat(0)));
            return assemble_character(chi_prime(cfg, order), Rat(7), Rat(0));
        }
        std::vector<Rat> shift = e7.dual_weight(0);
        for (Rat& x : shift) x = -x;
        const ChargeConfig cfg(std::move(e7), 0, 7, std::move(shift));
        return assemble_character(chi_prime(cfg, order), Rat(7), rat(3, 4));
    }
    if (tag == "v-e8") {
        const ChargeConfig cfg(GramLattice::builtin("E8"), 0, 8, std::vector<Rat>(8, Rat(0)));
        return assemble_character(chi_prime(cfg, order), Rat(8), Rat(0));
    }
    if (tag == "v-e712" || tag == "v-e712-a1") {
        std::vector<Rat> shift(8, Rat(0));
        Rat h(0);
        if (tag == "v-e712-a1") {
            shift[0] = Rat(1);
            h = rat(4, 5);
        }
        const ChargeConfig cfg(GramLattice::builtin("E8"), 1, 7, std::move(shift));
        return assemble_character(chi_prime(cfg, order), rat(38, 5), h);
    }
    throw UnknownTag("unknown character tag: " + tag);
}

}  // namespace ivoa
