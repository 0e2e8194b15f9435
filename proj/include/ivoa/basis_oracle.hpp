#pragma once
// Independent brute-force counting of the combinatorial spanning monomials.
//
// For a charge (k_1..k_r over the restricted roots, d over the free
// coordinates) the module piece is spanned by monomials
//
//     (mode sequence for rho_1) ... (mode sequence for rho_r)
//     x (one partition per free-boson direction)   acting on   e^{delta + lambda}
//
// where delta = sum_j d_j sigma_j.  A mode sequence for rho_i is a tuple
// (m_{k_i}, ..., m_1) with
//
//     m_1 <= -1 - sum_{l<i} k_l <rho_i, rho_l> - <rho_i, lambda + delta>
//     m_{j+1} <= m_j - <rho_i, rho_i>
//
// (first bound floored when fractional); the mode m contributes weight
// <rho_i,rho_i>/2 - m - 1, each partition part i contributes i, and the
// ground vector carries Q(delta + lambda)/2.  Counting monomials by total
// weight reproduces the graded dimension series without any q-series
// algebra, which is the whole point: the two computations share nothing but
// the Gram matrix.

#include <ivoa/characters.hpp>
#include <ivoa/errors.hpp>
#include <ivoa/lattice.hpp>
#include <ivoa/qseries.hpp>
#include <ivoa/rational.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ivoa {

struct ModeSequence {
    int root_index = 0;
    std::vector<long long> modes;  // (m_k, ..., m_1): most negative first
    Rat weight{0};                 // sum_j (<rho_i,rho_i>/2 - m_j - 1)
};

struct BasisMonomial {
    std::vector<long long> charge;                    // r+s free coordinates
    std::vector<std::vector<long long>> modes;        // one sequence per restricted root
    std::vector<std::vector<long long>> partitions;   // s partitions, parts weakly increasing
    Rat weight{0};                                    // total conformal weight
};

namespace detail {

inline Rat row_pairing(const GramLattice& lat, int i, const std::vector<Rat>& x) {
    Rat acc(0);
    const auto& row = lat.gram()[static_cast<size_t>(i)];
    for (size_t j = 0; j < x.size(); ++j) acc += row[j] * x[j];
    return acc;
}

// Minimal total weight of `count` modes whose first entry is bounded by
// floor(mmax) and whose successors drop by at least g, floors included.
inline Rat min_mode_weight(const Rat& g, Rat mmax, long long count) {
    Rat acc(0);
    for (long long u = 0; u < count; ++u) {
        const Int mf = floor_int(mmax);
        acc += g / 2 - Rat(mf) - 1;
        mmax = Rat(mf) - g;
    }
    return acc;
}

// All length-`remaining` sequences below the exact bound mmax with total
// weight acc + ... <= bound.  The loop over the current mode stops exactly
// when even the maximal continuation overshoots: one unit down in m raises
// the current weight by 1 and the best continuation by remaining-1.
template <class Emit>
void mode_sequences_impl(const Rat& g, const Rat& mmax, long long remaining, const Rat& acc,
                         const Rat& bound, std::vector<long long>& seq, Emit&& emit) {
    if (remaining == 0) {
        emit(seq, acc);
        return;
    }
    Int m = floor_int(mmax);
    Rat w = g / 2 - Rat(m) - 1;
    Rat rest = min_mode_weight(g, Rat(m) - g, remaining - 1);
    while (acc + w + rest <= bound) {
        seq.push_back(to_ll(m));
        mode_sequences_impl(g, Rat(m) - g, remaining - 1, acc + w, bound, seq, emit);
        seq.pop_back();
        m -= 1;
        w += 1;
        rest += Rat(static_cast<long>(remaining - 1));
    }
}

// Joint enumeration of all monomials of one charge: mode sequences for the
// restricted roots, then s-tuples of partitions.  `emit` receives the mode
// sequences (most negative first), the partitions and the total weight.
template <class Emit>
class MonomialEnumerator {
  public:
    MonomialEnumerator(const GramLattice& lat, int r, int s, Emit& emit, long long budget,
                       long long& used)
        : lat_(lat), r_(r), s_(s), emit_(emit), budget_(budget), used_(used) {}

    // x = lambda + delta (ground vector coordinates), kr = restricted charges,
    // top = absolute weight cap.
    void run(const std::vector<long long>& kr, const std::vector<Rat>& x, const Rat& top) {
        kr_ = &kr;
        ground_ = lat_.qform(x) / 2;
        cap_ = top - ground_;
        mmax_.assign(static_cast<size_t>(r_), Rat(0));
        tail_min_.assign(static_cast<size_t>(r_) + 1, Rat(0));
        const auto& A = lat_.gram();
        for (int i = 0; i < r_; ++i) {
            Rat prior(0);
            for (int l = 0; l < i; ++l)
                prior += Rat(to_int(kr[static_cast<size_t>(l)])) * A[static_cast<size_t>(i)][static_cast<size_t>(l)];
            mmax_[static_cast<size_t>(i)] = Rat(-1) - prior - row_pairing(lat_, i, x);
        }
        for (int i = r_ - 1; i >= 0; --i)
            tail_min_[static_cast<size_t>(i)] =
                tail_min_[static_cast<size_t>(i) + 1] +
                min_mode_weight(A[static_cast<size_t>(i)][static_cast<size_t>(i)],
                                mmax_[static_cast<size_t>(i)], kr[static_cast<size_t>(i)]);
        modes_.clear();
        root(0, Rat(0));
    }

  private:
    void root(int i, const Rat& acc) {
        if (i == r_) {
            const Rat prem = cap_ - acc;
            if (prem < 0) return;
            pcap_ = to_ll(floor_int(prem));
            base_ = ground_ + acc;
            parts_.assign(static_cast<size_t>(s_), {});
            partition(0, 1, 0);
            return;
        }
        const auto& A = lat_.gram();
        std::vector<long long> seq;
        // later roots still need at least tail_min_[i+1]
        mode_sequences_impl(A[static_cast<size_t>(i)][static_cast<size_t>(i)], mmax_[static_cast<size_t>(i)],
                            (*kr_)[static_cast<size_t>(i)], Rat(0),
                            cap_ - acc - tail_min_[static_cast<size_t>(i) + 1], seq,
                            [&](const std::vector<long long>& s, const Rat& w) {
                                modes_.emplace_back(s.rbegin(), s.rend());
                                root(i + 1, acc + w);
                                modes_.pop_back();
                            });
    }

    void partition(int j, long long minpart, long long tot) {
        if (j == s_) {
            if (++used_ > budget_)
                throw ScaleExceeded("basis enumeration budget exhausted (" + std::to_string(budget_) +
                                    " monomials)");
            emit_(modes_, parts_, base_ + Rat(to_int(tot)));
            return;
        }
        partition(j + 1, 1, tot);  // close partition j
        for (long long p = minpart; tot + p <= pcap_; ++p) {
            parts_[static_cast<size_t>(j)].push_back(p);
            partition(j, p, tot + p);
            parts_[static_cast<size_t>(j)].pop_back();
        }
    }

    const GramLattice& lat_;
    int r_, s_;
    Emit& emit_;
    long long budget_;
    long long& used_;

    const std::vector<long long>* kr_ = nullptr;
    Rat ground_{0}, cap_{0}, base_{0};
    long long pcap_ = 0;
    std::vector<Rat> mmax_, tail_min_;
    std::vector<std::vector<long long>> modes_, parts_;
};

// Charges within the window, restricted coordinates filtered, in the
// deterministic enumeration order.
inline std::vector<std::vector<long long>> oracle_charges(const ChargeConfig& cfg, int order) {
    const detail::ReducedConfig red = detail::reduce_config(cfg);
    const Rat bound = Rat(2 * order) + red.sub.qform(red.center);
    std::vector<std::vector<long long>> charges;
    enumerate_below(red.sub, red.center, bound, [&](const std::vector<long long>& k, const Rat&) {
        for (int i = 0; i < cfg.restricted; ++i)
            if (k[static_cast<size_t>(i)] < 0) return;
        charges.push_back(k);
    });
    return charges;
}

}  // namespace detail

// All mode sequences for restricted root `i` (0-based) at charge k whose
// weight contribution is at most weight_bound, in descending-first-mode
// order.
inline std::vector<ModeSequence> enumerate_Mi(const ChargeConfig& cfg, const std::vector<long long>& k,
                                              int i, const Rat& weight_bound) {
    if (i < 0 || i >= cfg.restricted) throw DomainViolation("root index out of range");
    if (static_cast<int>(k.size()) != cfg.restricted)
        throw DimensionMismatch("charge vector must have one entry per restricted root");
    for (long long v : k)
        if (v < 0) throw DomainViolation("restricted charges must be nonnegative");
    const auto& A = cfg.lattice.gram();
    Rat prior(0);
    for (int l = 0; l < i; ++l)
        prior += Rat(to_int(k[static_cast<size_t>(l)])) * A[static_cast<size_t>(i)][static_cast<size_t>(l)];
    const Rat mmax = Rat(-1) - prior - detail::row_pairing(cfg.lattice, i, cfg.shift);

    std::vector<ModeSequence> out;
    std::vector<long long> seq;
    detail::mode_sequences_impl(A[static_cast<size_t>(i)][static_cast<size_t>(i)], mmax,
                                k[static_cast<size_t>(i)], Rat(0), weight_bound, seq,
                                [&](const std::vector<long long>& s, const Rat& w) {
                                    ModeSequence ms;
                                    ms.root_index = i;
                                    ms.modes.assign(s.rbegin(), s.rend());
                                    ms.weight = w;
                                    out.push_back(std::move(ms));
                                });
    return out;
}

// Counts spanning monomials by total weight and assembles the counting
// series with the same window convention as graded_dimension.
inline QSeries oracle_graded_dimension(const ChargeConfig& cfg, int order,
                                       long long budget = 10'000'000) {
    if (order < 0) throw DomainViolation("order must be nonnegative");
    if (budget < 1) throw DomainViolation("budget must be positive");
    const Rat top = cfg.lattice.qform(cfg.shift) / 2 + order;

    std::map<Rat, long long> counts;
    long long used = 0;
    if (cfg.restricted + cfg.heisenberg == 0) {
        counts[top - order] = 1;
    } else {
        auto tally = [&](const std::vector<std::vector<long long>>&,
                         const std::vector<std::vector<long long>>&, const Rat& w) { ++counts[w]; };
        detail::MonomialEnumerator<decltype(tally)> en(cfg.lattice, cfg.restricted, cfg.heisenberg,
                                                       tally, budget, used);
        const int m = cfg.restricted + cfg.heisenberg;
        for (const auto& k : detail::oracle_charges(cfg, order)) {
            std::vector<Rat> x(cfg.shift);
            for (int i = cfg.restricted; i < m; ++i)
                x[static_cast<size_t>(i)] += Rat(to_int(k[static_cast<size_t>(i)]));
            en.run(std::vector<long long>(k.begin(), k.begin() + cfg.restricted), x, top);
        }
    }

    const Rat emin = counts.begin()->first;
    std::vector<Rat> dense(static_cast<size_t>(order) + 1, Rat(0));
    for (const auto& [w, c] : counts) {
        const Rat rel = w - emin;
        if (!is_integer(rel))
            throw DomainViolation("oracle weights do not lie on an integral grid");
        const long long slot = to_ll(rel.get_num());
        if (slot <= order) dense[static_cast<size_t>(slot)] += Rat(to_int(c));
    }
    return QSeries(emin, std::move(dense));
}

inline bool oracle_matches_formula(const ChargeConfig& cfg, int order,
                                   long long budget = 10'000'000) {
    const QSeries a = oracle_graded_dimension(cfg, order, budget);
    const QSeries b = graded_dimension(cfg, order);
    return equal_to_order(a, b, order);
}

// Every monomial of one fixed charge with weight at most Q(k+l)/2 + order,
// in deterministic enumeration order (for inspection and JSON dumps).
inline std::vector<BasisMonomial> enumerate_basis(const ChargeConfig& cfg,
                                                  const std::vector<long long>& charge, int order,
                                                  long long budget = 10'000'000) {
    if (order < 0) throw DomainViolation("order must be nonnegative");
    if (budget < 1) throw DomainViolation("budget must be positive");
    const int m = cfg.restricted + cfg.heisenberg;
    if (static_cast<int>(charge.size()) != m)
        throw DimensionMismatch("charge vector must list the restricted and free coordinates");
    for (int i = 0; i < cfg.restricted; ++i)
        if (charge[static_cast<size_t>(i)] < 0)
            throw DomainViolation("restricted charge coordinates must be nonnegative");

    std::vector<Rat> full(cfg.shift);
    for (int i = 0; i < m; ++i) full[static_cast<size_t>(i)] += Rat(to_int(charge[static_cast<size_t>(i)]));
    const Rat top = cfg.lattice.qform(full) / 2 + order;

    std::vector<BasisMonomial> out;
    long long used = 0;
    if (m == 0) {
        out.push_back({{}, {}, {}, top - order});
        return out;
    }
    auto collect = [&](const std::vector<std::vector<long long>>& modes,
                       const std::vector<std::vector<long long>>& parts, const Rat& w) {
        out.push_back({charge, modes, parts, w});
    };
    detail::MonomialEnumerator<decltype(collect)> en(cfg.lattice, cfg.restricted, cfg.heisenberg,
                                                     collect, budget, used);
    std::vector<Rat> x(cfg.shift);
    for (int i = cfg.restricted; i < m; ++i)
        x[static_cast<size_t>(i)] += Rat(to_int(charge[static_cast<size_t>(i)]));
    en.run(std::vector<long long>(charge.begin(), charge.begin() + cfg.restricted), x, top);
    return out;
}

}  // namespace ivoa
