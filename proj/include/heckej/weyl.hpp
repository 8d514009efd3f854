#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heckej/error.hpp"

namespace heckej {

enum class AffineType : std::uint8_t { A1, A2 };

/// Which extended affine Weyl group to build.
///
/// The adjoint-group affine Weyl group is realized as W_cox x| Omega, where
/// Omega is the cyclic group of length-zero diagram rotations. The length
/// function is extended by l(omega * w) = l(w).
struct GroupDescriptor {
    AffineType type = AffineType::A1;
    bool extended = false;

    int generator_count() const { return type == AffineType::A1 ? 2 : 3; }
    /// Length of the longest element of the finite Weyl group.
    int finite_longest_length() const { return type == AffineType::A1 ? 1 : 3; }
    int omega_order() const { return extended ? generator_count() : 1; }

    std::string label() const { return type == AffineType::A1 ? "A1~" : "A2~"; }

    static GroupDescriptor parse(std::string_view label, bool extended) {
        if (label == "A1~" || label == "A1" || label == "affine A1") return {AffineType::A1, extended};
        if (label == "A2~" || label == "A2" || label == "affine A2") return {AffineType::A2, extended};
        throw UnsupportedType("unsupported affine type '" + std::string(label) + "' (supported: A1~, A2~)");
    }

    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

/// An element w * omega: Coxeter part as its ShortLex-least reduced word and
/// the length-zero part as an index into Omega.
///
/// Normal forms are unique, so equality is plain member equality. Ordering is
/// by length, then word, then omega, which is the order balls are listed in.
struct GroupElement {
    std::vector<std::uint8_t> word;
    std::uint8_t omega = 0;
    std::uint8_t group_tag = 0;

    int length() const { return static_cast<int>(word.size()); }
    bool is_identity() const { return word.empty() && omega == 0; }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
        if (auto c = a.word.size() <=> b.word.size(); c != 0) return c;
        if (auto c = a.word <=> b.word; c != 0) return c;
        if (auto c = a.omega <=> b.omega; c != 0) return c;
        return a.group_tag <=> b.group_tag;
    }
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto s : g.word) h = (h ^ s) * 1099511628211ull;
        h = (h ^ (g.omega + 0x100u)) * 1099511628211ull;
        return h;
    }
};

/// "010@1" style rendering; the identity Coxeter part is written "e".
inline std::string format_element(const GroupElement& g) {
    std::string s;
    if (g.word.empty()) s = "e";
    for (auto i : g.word) s.push_back(static_cast<char>('0' + i));
    if (g.omega != 0) s += "@" + std::to_string(g.omega);
    return s;
}

/// A Coxeter group given by a crystallographic Cartan matrix, optionally
/// extended by a cyclic group of diagram rotations.
///
/// Descents are decided in the geometric representation on the root lattice:
/// s is a right descent of w iff w(alpha_s) is a negative root. That is the
/// exchange condition in linear-algebra form and it needs no memo tables, so
/// a Group is immutable after construction and safe to share across threads.
class Group {
public:
    static constexpr int kMaxRank = 8;
    using RootVector = std::array<std::int64_t, kMaxRank>;
    using Matrix = std::array<RootVector, kMaxRank>;  // columns

    explicit Group(const GroupDescriptor& desc) : desc_(desc) {
        if (desc.type == AffineType::A1) {
            init_cartan({{2, -2}, {-2, 2}});
        } else {
            init_cartan({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
        }
        tag_ = static_cast<std::uint8_t>(1 + 2 * static_cast<int>(desc.type) + (desc.extended ? 1 : 0));
        int order = desc.omega_order();
        for (int k = 0; k < order; ++k) {
            std::vector<std::uint8_t> perm(static_cast<std::size_t>(rank_));
            for (int i = 0; i < rank_; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((i + k) % rank_);
            omega_perm_.push_back(std::move(perm));
        }
        validate_omega();
    }

    const GroupDescriptor& descriptor() const { return desc_; }
    int rank() const { return rank_; }
    int omega_order() const { return static_cast<int>(omega_perm_.size()); }
    std::uint8_t tag() const { return tag_; }
    int cartan(int i, int j) const { return cartan_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    /// Coxeter matrix entry m(s_i, s_j); 0 encodes infinity.
    int coxeter_order(int i, int j) const {
        if (i == j) return 1;
        int p = cartan(i, j) * cartan(j, i);
        switch (p) {
            case 0: return 2;
            case 1: return 3;
            case 2: return 4;
            case 3: return 6;
            default: return 0;
        }
    }

    /// Image of generator i under conjugation by omega_k.
    int omega_apply(int k, int i) const {
        return omega_perm_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }
    int omega_compose(int a, int b) const { return (a + b) % omega_order(); }
    int omega_inverse(int a) const { return (omega_order() - a) % omega_order(); }

    GroupElement identity() const { return make({}, 0); }
    GroupElement generator(int i) const {
        check_generator(i);
        return make({static_cast<std::uint8_t>(i)}, 0);
    }
    GroupElement omega(int k) const {
        if (k < 0 || k >= omega_order()) throw GroupMismatch("omega index " + std::to_string(k) + " out of range");
        return make({}, static_cast<std::uint8_t>(k));
    }

    /// Normal form of the product s_{w[0]} ... s_{w[k-1]} * omega.
    GroupElement element(const std::vector<std::uint8_t>& word, int omega_index = 0) const {
        for (auto s : word) check_generator(s);
        if (omega_index < 0 || omega_index >= omega_order())
            throw GroupMismatch("omega index " + std::to_string(omega_index) + " out of range");
        return make(normal_form(word), static_cast<std::uint8_t>(omega_index));
    }

    /// Parses "010", "010@1", "e", "" or "e@1".
    GroupElement parse(std::string_view text) const {
        int omega_index = 0;
        auto at = text.find('@');
        std::string_view body = text.substr(0, at);
        if (at != std::string_view::npos) {
            std::string_view tail = text.substr(at + 1);
            if (tail.empty() || tail.find_first_not_of("0123456789") != std::string_view::npos)
                throw ParseError("bad omega suffix in element '" + std::string(text) + "'");
            omega_index = std::stoi(std::string(tail));
        }
        std::vector<std::uint8_t> word;
        if (body != "e") {
            for (char c : body) {
                if (c < '0' || c > '9') throw ParseError("bad generator '" + std::string(1, c) + "' in element '" + std::string(text) + "'");
                word.push_back(static_cast<std::uint8_t>(c - '0'));
            }
        }
        return element(word, omega_index);
    }

    void check(const GroupElement& g) const {
        if (g.group_tag != tag_) throw GroupMismatch("element " + format_element(g) + " belongs to a different group");
    }

    GroupElement multiply(const GroupElement& a, const GroupElement& b) const {
        check(a);
        check(b);
        // (u w) (v w') = u (w v w^{-1}) w w'
        std::vector<std::uint8_t> word = a.word;
        for (auto s : b.word) word.push_back(static_cast<std::uint8_t>(omega_apply(a.omega, s)));
        return make(normal_form(word), static_cast<std::uint8_t>(omega_compose(a.omega, b.omega)));
    }

    GroupElement inverse(const GroupElement& a) const {
        check(a);
        // (u w)^{-1} = w^{-1} u^{-1} = (w^{-1} u^{-1} w) w^{-1}
        int winv = omega_inverse(a.omega);
        std::vector<std::uint8_t> word(a.word.rbegin(), a.word.rend());
        for (auto& s : word) s = static_cast<std::uint8_t>(omega_apply(winv, s));
        return make(normal_form(word), static_cast<std::uint8_t>(winv));
    }

    int length(const GroupElement& a) const {
        check(a);
        return a.length();
    }

    /// Generators s with l(s a) < l(a), as a bitmask.
    unsigned left_descents(const GroupElement& a) const {
        check(a);
        Matrix m = inverse_action(a.word);
        unsigned mask = 0;
        for (int s = 0; s < rank_; ++s)
            if (is_negative(m[static_cast<std::size_t>(s)])) mask |= 1u << s;
        return mask;
    }

    /// Generators s with l(a s) < l(a), as a bitmask.
    unsigned right_descents(const GroupElement& a) const {
        check(a);
        Matrix m = action(a.word);
        unsigned mask = 0;
        for (int s = 0; s < rank_; ++s)
            if (is_negative(m[static_cast<std::size_t>(omega_apply(a.omega, s))])) mask |= 1u << s;
        return mask;
    }

    /// Bruhat order using the normal form of w as the fixed reduced expression.
    bool bruhat_leq(const GroupElement& y, const GroupElement& w) const {
        return bruhat_leq(y, w, w.word);
    }

    /// Bruhat order decided by the subword property on a given reduced
    /// expression of w. Elements with different Omega parts are incomparable.
    ///
    /// Scans the expression right to left, stripping each letter from y
    /// whenever it is a right descent of what is left of y; y <= w iff y is
    /// used up.
    bool bruhat_leq(const GroupElement& y, const GroupElement& w, const std::vector<std::uint8_t>& reduced_word) const {
        check(y);
        check(w);
        if (normal_form(reduced_word) != w.word || reduced_word.size() != w.word.size())
            throw Error("bruhat_leq: given word is not a reduced expression of " + format_element(w));
        if (y.omega != w.omega) return false;
        if (y.length() > w.length()) return false;
        Matrix m = action(y.word);
        int remaining = y.length();
        for (auto it = reduced_word.rbegin(); it != reduced_word.rend() && remaining > 0; ++it) {
            int s = *it;
            if (is_negative(m[static_cast<std::size_t>(s)])) {
                right_multiply(m, s);
                --remaining;
            }
        }
        return remaining == 0;
    }

    /// All elements of length <= max_length, sorted by (length, word, omega).
    std::vector<GroupElement> enumerate_ball(int max_length) const {
        if (max_length < 0) throw Error("enumerate_ball: negative length");
        std::vector<std::vector<std::uint8_t>> layer{{}};
        std::vector<std::vector<std::uint8_t>> all{{}};
        for (int len = 1; len <= max_length; ++len) {
            std::vector<std::vector<std::uint8_t>> next;
            for (const auto& w : layer) {
                Matrix m = action(w);
                for (int s = 0; s < rank_; ++s) {
                    if (is_negative(m[static_cast<std::size_t>(s)])) continue;
                    auto u = w;
                    u.push_back(static_cast<std::uint8_t>(s));
                    next.push_back(normal_form(u));
                }
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            all.insert(all.end(), next.begin(), next.end());
            layer = std::move(next);
        }
        std::vector<GroupElement> out;
        out.reserve(all.size() * static_cast<std::size_t>(omega_order()));
        for (const auto& w : all)
            for (int k = 0; k < omega_order(); ++k) out.push_back(make(w, static_cast<std::uint8_t>(k)));
        return out;
    }

    /// ShortLex-least reduced word for the Coxeter element spelled by `word`.
    ///
    /// Repeatedly peels off the smallest left descent; the descent test reads
    /// the sign of w^{-1}(alpha_s) from the tracked matrix of w^{-1}.
    std::vector<std::uint8_t> normal_form(const std::vector<std::uint8_t>& word) const {
        Matrix m = inverse_action(word);
        std::vector<std::uint8_t> out;
        out.reserve(word.size());
        for (;;) {
            int s = 0;
            while (s < rank_ && !is_negative(m[static_cast<std::size_t>(s)])) ++s;
            if (s == rank_) break;
            out.push_back(static_cast<std::uint8_t>(s));
            right_multiply(m, s);  // w^{-1} <- w^{-1} s, i.e. w <- s w
        }
        return out;
    }

    bool is_reduced(const std::vector<std::uint8_t>& word) const {
        return normal_form(word).size() == word.size();
    }

private:
    GroupElement make(std::vector<std::uint8_t> word, std::uint8_t omega_index) const {
        return GroupElement{std::move(word), omega_index, tag_};
    }

    void check_generator(int s) const {
        if (s < 0 || s >= rank_) throw GroupMismatch("generator index " + std::to_string(s) + " out of range");
    }

    void init_cartan(std::vector<std::vector<int>> a) {
        rank_ = static_cast<int>(a.size());
        cartan_ = std::move(a);
    }

    void validate_omega() const {
        for (const auto& perm : omega_perm_)
            for (int i = 0; i < rank_; ++i)
                for (int j = 0; j < rank_; ++j)
                    if (coxeter_order(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) != coxeter_order(i, j))
                        throw UnsupportedType("omega action is not a diagram automorphism");
    }

    Matrix identity_matrix() const {
        Matrix m{};
        for (int i = 0; i < rank_; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        return m;
    }

    /// m <- m * S_s as a column operation: col_j -= A(s, j) * col_s.
    void right_multiply(Matrix& m, int s) const {
        const auto& col_s = m[static_cast<std::size_t>(s)];
        RootVector saved = col_s;
        for (int j = 0; j < rank_; ++j) {
            int a = cartan(s, j);
            if (a == 0) continue;
            auto& col = m[static_cast<std::size_t>(j)];
            for (int k = 0; k < rank_; ++k) col[static_cast<std::size_t>(k)] -= a * saved[static_cast<std::size_t>(k)];
        }
    }

    /// Columns are w(alpha_j).
    Matrix action(const std::vector<std::uint8_t>& word) const {
        Matrix m = identity_matrix();
        for (auto s : word) right_multiply(m, s);
        return m;
    }

    /// Columns are w^{-1}(alpha_j).
    Matrix inverse_action(const std::vector<std::uint8_t>& word) const {
        Matrix m = identity_matrix();
        for (auto it = word.rbegin(); it != word.rend(); ++it) right_multiply(m, *it);
        return m;
    }

    bool is_negative(const RootVector& r) const {
        for (int k = 0; k < rank_; ++k) {
            if (r[static_cast<std::size_t>(k)] != 0) return r[static_cast<std::size_t>(k)] < 0;
        }
        return false;
    }

    GroupDescriptor desc_;
    int rank_ = 0;
    std::vector<std::vector<int>> cartan_;
    std::vector<std::vector<std::uint8_t>> omega_perm_;
    std::uint8_t tag_ = 0;
};

using GroupHandle = std::shared_ptr<const Group>;

inline GroupHandle make_group(const GroupDescriptor& desc) { return std::make_shared<const Group>(desc); }

}  // namespace heckej
