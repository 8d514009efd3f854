#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "heckej/error.hpp"
#include "heckej/numbers.hpp"
#include "heckej/ratfunc.hpp"

namespace heckej::sl2 {

// Haar measure: vol(I) = 1, vol(K) = q + 1. Cells are X_n = K x_n I with
// x_n = diag(t^n, t^-n).

/// Target lattice of a convolution: O+O or O+tO.
enum class Lattice : std::uint8_t { Std, Sub };

inline const char* to_string(Lattice l) { return l == Lattice::Std ? "std" : "sub"; }

inline Lattice parse_lattice(std::string_view s) {
    if (s == "std" || s == "O+O") return Lattice::Std;
    if (s == "sub" || s == "O+tO") return Lattice::Sub;
    throw ParseError("unknown lattice '" + std::string(s) + "' (expected std or sub)");
}

inline RatFunc qpow(int k) { return RatFunc::monomial(1, k); }

/// Coefficient of chi_{X_n} in f.
inline RatFunc gamma_n(int n) { return n <= 0 ? qpow(2 * n) : -qpow(-2 * n + 1); }

/// vol(X_n) / vol(K) = #(K / H_n) / (q + 1), with H_n = K cap x_n I x_n^-1.
/// Ratio 1 at n = 0 since X_0 = K.
inline RatFunc volume_ratio(int n) { return n > 0 ? qpow(2 * n - 1) : qpow(-2 * n); }

/// (chi_{X_n} * chi_L)(t^-r, 0).
inline RatFunc conv_cell_value(int n, int r, Lattice lattice) {
    const RatFunc q1 = RatFunc::q() + RatFunc(1);
    if (lattice == Lattice::Std) {
        if (n > 0) {
            if (r > n) return 0;
            if (r <= -n) return q1 * qpow(2 * n - 1);
            return qpow(n - r);
        }
        if (n == 0) return r <= 0 ? q1 : RatFunc(0);
        int m = -n;
        if (r > m) return 0;
        if (r <= -m) return q1 * qpow(2 * m);
        return qpow(m - r + 1);
    }
    if (n > 0) {
        if (r > n - 1) return 0;
        if (r <= -n) return q1 * qpow(2 * n - 1);
        return qpow(n - r);
    }
    int m = -n;
    if (r > m) return 0;
    if (r <= -m - 1) return q1 * qpow(2 * m);
    return qpow(m - r);
}

/// Geometric tail: value(start) = initial, each step away from the middle
/// multiplies by ratio.
struct Tail {
    int start = 0;
    RatFunc initial;
    RatFunc ratio;
};

/// Function of n in Z with finitely many exceptional values and a geometric
/// tail in each direction.
class CellFunction {
public:
    CellFunction(std::map<int, RatFunc> exceptional, Tail pos, Tail neg)
        : exceptional_(std::move(exceptional)), pos_(std::move(pos)), neg_(std::move(neg)) {
        if (neg_.start >= pos_.start) throw Error("CellFunction: tails overlap");
        for (const auto& [n, v] : exceptional_)
            if (n >= pos_.start || n <= neg_.start)
                throw Error("CellFunction: exceptional index " + std::to_string(n) + " lies inside a tail");
    }

    const Tail& pos_tail() const { return pos_; }
    const Tail& neg_tail() const { return neg_; }
    const std::map<int, RatFunc>& exceptional() const { return exceptional_; }

    RatFunc value(int n) const {
        if (n >= pos_.start) return pos_.initial * pos_.ratio.pow(n - pos_.start);
        if (n <= neg_.start) return neg_.initial * neg_.ratio.pow(neg_.start - n);
        auto it = exceptional_.find(n);
        return it == exceptional_.end() ? RatFunc(0) : it->second;
    }

    /// Sum over all n, the tails summed as formal geometric series in q^-1.
    RatFunc sum() const {
        RatFunc s = tail_sum(pos_) + tail_sum(neg_);
        for (const auto& [n, v] : exceptional_) s += v;
        return s;
    }

    RatFunc partial_sum(int N) const {
        RatFunc s;
        for (int n = -N; n <= N; ++n) s += value(n);
        return s;
    }

    /// Sum over |n| > N as an exact rational function.
    RatFunc remainder(int N) const { return sum() - partial_sum(N); }

    /// |value(N+1)| / (1 - |rho+|) + |value(-N-1)| / (1 - |rho-|) at q; an
    /// upper bound for |remainder(N)| at q once both indices are in the tails
    /// and the ratios are below 1 in absolute value there.
    Rational remainder_bound(int N, const Rational& q) const {
        if (N + 1 < pos_.start || -N - 1 > neg_.start) throw Error("remainder_bound: N is inside the exceptional window");
        auto piece = [&](const RatFunc& first, const RatFunc& ratio) {
            Rational a = abs(first.evaluate(q));
            Rational rho = abs(ratio.evaluate(q));
            if (a == 0) return Rational(0);
            if (rho >= 1) throw DivergentTail("remainder_bound: |ratio| >= 1 at q = " + heckej::to_string(q));
            return Rational(a / (1 - rho));
        };
        return piece(value(N + 1), pos_.ratio) + piece(value(-N - 1), neg_.ratio);
    }

    friend CellFunction pointwise_product(const CellFunction& a, const CellFunction& b) {
        int ps = std::max(a.pos_.start, b.pos_.start);
        int ns = std::min(a.neg_.start, b.neg_.start);
        std::map<int, RatFunc> ex;
        for (int n = ns + 1; n < ps; ++n) {
            RatFunc v = a.value(n) * b.value(n);
            if (!v.is_zero()) ex.emplace(n, std::move(v));
        }
        return CellFunction(std::move(ex), Tail{ps, a.value(ps) * b.value(ps), a.pos_.ratio * b.pos_.ratio},
                            Tail{ns, a.value(ns) * b.value(ns), a.neg_.ratio * b.neg_.ratio});
    }

private:
    static Rational abs(const Rational& x) { return x < 0 ? -x : x; }

    static RatFunc tail_sum(const Tail& t) {
        if (t.initial.is_zero() || t.ratio.is_zero()) return t.initial;
        auto mono = t.ratio.as_monomial();
        if (!mono || mono->second >= 0)
            throw DivergentTail("tail ratio " + t.ratio.to_string() + " is not of the form c*q^k with k < 0");
        return t.initial / (RatFunc(1) - t.ratio);
    }

    std::map<int, RatFunc> exceptional_;
    Tail pos_;
    Tail neg_;
};

/// f = sum_n gamma_n chi_{X_n}.
inline CellFunction f_function() {
    return CellFunction({}, Tail{1, gamma_n(1), qpow(-2)}, Tail{0, gamma_n(0), qpow(-2)});
}

/// n -> conv_cell_value(n, r, lattice). Beyond |n| = |r| + 1 the tables are
/// in their generic branch, q^{n-r} for n > 0 and q^{m-r+1} (std) or
/// q^{m-r} (sub) for n = -m, both growing by q per step.
inline CellFunction cell_values(int r, Lattice lattice) {
    int edge = std::abs(r) + 2;
    std::map<int, RatFunc> ex;
    for (int n = -edge + 1; n < edge; ++n) {
        RatFunc v = conv_cell_value(n, r, lattice);
        if (!v.is_zero()) ex.emplace(n, std::move(v));
    }
    return CellFunction(std::move(ex), Tail{edge, conv_cell_value(edge, r, lattice), qpow(1)},
                        Tail{-edge, conv_cell_value(-edge, r, lattice), qpow(1)});
}

/// n -> gamma_n * conv_cell_value(n, r, lattice).
inline CellFunction conv_terms(int r, Lattice lattice) { return pointwise_product(f_function(), cell_values(r, lattice)); }

/// (f * chi_L)(t^-r, 0).
inline RatFunc conv_f_value(int r, Lattice lattice) { return conv_terms(r, lattice).sum(); }

struct Check {
    std::string name;
    int r = 0;
    bool pass = false;
    std::string value;
};

struct Report {
    std::vector<Check> checks;
    std::size_t passed() const {
        std::size_t k = 0;
        for (const auto& c : checks) k += c.pass;
        return k;
    }
    std::size_t failed() const { return checks.size() - passed(); }
};

/// gamma_r + q gamma_{-r} = 0 for 1 <= r <= R and q gamma_{r+1} + gamma_{-r} = 0
/// for 0 <= r <= R.
inline Report verify_relations(int R) {
    if (R < 1) throw Error("verify_relations: R must be positive");
    Report rep;
    const RatFunc q = RatFunc::q();
    for (int r = 1; r <= R; ++r) {
        RatFunc v = gamma_n(r) + q * gamma_n(-r);
        rep.checks.push_back({"rel1", r, v.is_zero(), v.to_string()});
    }
    for (int r = 0; r <= R; ++r) {
        RatFunc v = q * gamma_n(r + 1) + gamma_n(-r);
        rep.checks.push_back({"rel2", r, v.is_zero(), v.to_string()});
    }
    return rep;
}

struct DecayReport {
    Report report;
    Rational max_weighted;
};

/// q^{|n|} |gamma_n(q)| <= q for |n| <= N.
inline DecayReport schwartz_decay_check(int N, const Rational& q) {
    if (q <= 1) throw Error("schwartz_decay_check: q must exceed 1");
    if (N < 1) throw Error("schwartz_decay_check: N must be positive");
    DecayReport out;
    out.max_weighted = 0;
    for (int n = -N; n <= N; ++n) {
        Rational g = gamma_n(n).evaluate(q);
        if (g < 0) g = -g;
        Rational w = pow(q, std::abs(n)) * g;
        if (w > out.max_weighted) out.max_weighted = w;
        out.report.checks.push_back({"decay", n, w <= q, heckej::to_string(w)});
    }
    return out;
}

/// Exact counts in SL(2, Z/p^m) standing in for Haar volumes in SL(2, O).
///
/// Every triple (a, b, c) mod p^m is enumerated and weighted by the number of
/// d with ad - bc = 1, which is 1 for a unit a and p^{v(a)} or 0 otherwise.
/// The resulting histogram over clamped valuations (v(a), v(b), v(c)) is kept
/// per (p, m). A condition v(x) >= k is decided exactly for k <= m; beyond
/// that a count is reported only when it is already zero at threshold m.
class CountingOracle {
public:
    explicit CountingOracle(std::uint64_t budget = 10'000'000) : budget_(budget) {}

    std::uint64_t budget() const { return budget_; }
    std::uint64_t enumerated() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return enumerated_;
    }

    /// #{g : v(a) >= n + r, v(c) >= r - n (+1 for Sub)} / #SL(2, Z/p^m).
    Rational count(unsigned p, int m, int n, int r, Lattice lattice) const {
        int ta = std::max(n + r, 0);
        int tc = std::max(r - n + (lattice == Lattice::Sub ? 1 : 0), 0);
        const Histogram& h = histogram(p, m);
        std::uint64_t hits = h.sum(std::min(ta, m), 0, std::min(tc, m));
        if ((ta > m || tc > m) && hits != 0)
            throw DepthTooSmall("thresholds (" + std::to_string(ta) + ", " + std::to_string(tc) +
                                ") are not decidable modulo " + std::to_string(p) + "^" + std::to_string(m));
        return Rational(hits) / Rational(h.total);
    }

    /// vol(H_n) / vol(K): v(b) >= 2n for n > 0, v(c) >= 1 - 2n for n <= 0.
    Rational subgroup_fraction(unsigned p, int m, int n) const {
        int tb = n > 0 ? 2 * n : 0;
        int tc = n > 0 ? 0 : 1 - 2 * n;
        if (tb > m || tc > m)
            throw DepthTooSmall("H_" + std::to_string(n) + " is not determined modulo " + std::to_string(p) + "^" +
                                std::to_string(m));
        const Histogram& h = histogram(p, m);
        return Rational(h.sum(0, tb, tc)) / Rational(h.total);
    }

    /// vol(X_n) / vol(K) = [K : H_n] / (q + 1) at q = p.
    Rational volume_ratio(unsigned p, int m, int n) const {
        return Rational(1) / (subgroup_fraction(p, m, n) * Rational(p + 1));
    }

private:
    struct Histogram {
        int m = 0;
        std::vector<std::uint64_t> weight;  // index (va * (m+1) + vb) * (m+1) + vc
        std::uint64_t total = 0;

        std::uint64_t sum(int ta, int tb, int tc) const {
            std::uint64_t s = 0;
            int w = m + 1;
            for (int a = ta; a <= m; ++a)
                for (int b = tb; b <= m; ++b)
                    for (int c = tc; c <= m; ++c) s += weight[static_cast<std::size_t>((a * w + b) * w + c)];
            return s;
        }
    };

    const Histogram& histogram(unsigned p, int m) const {
        if (p < 2) throw Error("CountingOracle: p must be a prime");
        for (unsigned d = 2; d * d <= p; ++d)
            if (p % d == 0) throw Error("CountingOracle: " + std::to_string(p) + " is not prime");
        if (m < 1) throw Error("CountingOracle: m must be positive");
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(p, m);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::uint64_t N = 1;
        for (int k = 0; k < m; ++k) {
            N *= p;
            if (N > (1u << 21)) throw BudgetExceeded("p^m too large for enumeration");
        }
        std::uint64_t cost = N * N * N;
        if (enumerated_ + cost > budget_)
            throw BudgetExceeded("enumerating SL(2, Z/" + std::to_string(p) + "^" + std::to_string(m) + ") needs " +
                                 std::to_string(cost) + " triples; budget left " + std::to_string(budget_ - enumerated_));
        std::vector<int> val(N);
        std::vector<std::uint64_t> ppow(static_cast<std::size_t>(m) + 1, 1);
        for (int k = 1; k <= m; ++k) ppow[static_cast<std::size_t>(k)] = ppow[static_cast<std::size_t>(k) - 1] * p;
        for (std::uint64_t x = 0; x < N; ++x) {
            int k = 0;
            while (k < m && x % ppow[static_cast<std::size_t>(k) + 1] == 0) ++k;
            val[x] = k;
        }
        Histogram h;
        h.m = m;
        int w = m + 1;
        h.weight.assign(static_cast<std::size_t>(w * w * w), 0);
        for (std::uint64_t a = 0; a < N; ++a) {
            int va = val[a];
            std::uint64_t pk = ppow[static_cast<std::size_t>(va)];
            for (std::uint64_t b = 0; b < N; ++b) {
                int vb = val[b];
                for (std::uint64_t c = 0; c < N; ++c) {
                    // d with a d = 1 + b c: one if a is a unit, p^{v(a)} if p^{v(a)} | 1 + bc
                    if ((1 + b * c) % pk != 0) continue;
                    h.weight[static_cast<std::size_t>((va * w + vb) * w + val[c])] += pk;
                    h.total += pk;
                }
            }
        }
        enumerated_ += cost;
        return cache_.emplace(key, std::move(h)).first->second;
    }

    std::uint64_t budget_;
    mutable std::mutex mutex_;
    mutable std::uint64_t enumerated_ = 0;
    mutable std::map<std::pair<unsigned, int>, Histogram> cache_;
};

}  // namespace heckej::sl2
