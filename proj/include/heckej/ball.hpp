#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "heckej/error.hpp"
#include "heckej/weyl.hpp"

namespace heckej {

/// Indexed Coxeter part of a group up to a length bound.
///
/// Elements are numbered by (length, normal form), so every element of
/// length k has a smaller index than every element of length k+1. Left and
/// right generator actions, descents and inverses are tabulated; products
/// that leave the ball map to `npos`.
class Ball {
public:
    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    Ball(GroupHandle group, int radius) : group_(std::move(group)), radius_(radius) {
        if (radius < 0) throw Error("Ball: negative radius");
        auto elements = group_->enumerate_ball(radius);
        for (const auto& g : elements) {
            if (g.omega != 0) continue;
            index_.emplace(key(g.word), static_cast<std::uint32_t>(words_.size()));
            words_.push_back(g.word);
        }
        std::size_t n = words_.size();
        int r = group_->rank();
        left_.assign(n * static_cast<std::size_t>(r), npos);
        right_.assign(n * static_cast<std::size_t>(r), npos);
        left_desc_.assign(n, 0);
        right_desc_.assign(n, 0);
        inverse_.assign(n, npos);
        layer_start_.assign(static_cast<std::size_t>(radius + 2), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& w = words_[i];
            for (int s = 0; s < r; ++s) {
                std::vector<std::uint8_t> sw{static_cast<std::uint8_t>(s)};
                sw.insert(sw.end(), w.begin(), w.end());
                auto ws = w;
                ws.push_back(static_cast<std::uint8_t>(s));
                auto nl = group_->normal_form(sw);
                auto nr = group_->normal_form(ws);
                if (nl.size() < w.size()) left_desc_[i] |= 1u << s;
                if (nr.size() < w.size()) right_desc_[i] |= 1u << s;
                left_[i * static_cast<std::size_t>(r) + static_cast<std::size_t>(s)] = find(nl);
                right_[i * static_cast<std::size_t>(r) + static_cast<std::size_t>(s)] = find(nr);
            }
            std::vector<std::uint8_t> rev(w.rbegin(), w.rend());
            inverse_[i] = find(group_->normal_form(rev));
        }
        for (std::size_t i = 0; i < n; ++i) layer_start_[words_[i].size() + 1] = static_cast<std::uint32_t>(i + 1);
        for (std::size_t k = 1; k < layer_start_.size(); ++k)
            layer_start_[k] = std::max(layer_start_[k], layer_start_[k - 1]);
    }

    const GroupHandle& group() const { return group_; }
    int radius() const { return radius_; }
    std::size_t size() const { return words_.size(); }

    const std::vector<std::uint8_t>& word(std::uint32_t i) const { return words_[i]; }
    int length(std::uint32_t i) const { return static_cast<int>(words_[i].size()); }

    /// Index of s*w, or npos outside the ball.
    std::uint32_t left(std::uint32_t w, int s) const { return left_[w * static_cast<std::size_t>(group_->rank()) + static_cast<std::size_t>(s)]; }
    std::uint32_t right(std::uint32_t w, int s) const { return right_[w * static_cast<std::size_t>(group_->rank()) + static_cast<std::size_t>(s)]; }
    unsigned left_descents(std::uint32_t w) const { return left_desc_[w]; }
    unsigned right_descents(std::uint32_t w) const { return right_desc_[w]; }
    bool is_left_descent(std::uint32_t w, int s) const { return (left_desc_[w] >> s) & 1u; }
    std::uint32_t inverse(std::uint32_t w) const { return inverse_[w]; }

    /// Indices of elements with length < k form the prefix [0, count_below(k)).
    std::uint32_t count_below(int k) const {
        if (k <= 0) return 0;
        if (k > radius_) return static_cast<std::uint32_t>(words_.size());
        return layer_start_[static_cast<std::size_t>(k)];
    }

    std::uint32_t find(const std::vector<std::uint8_t>& normal_word) const {
        auto it = index_.find(key(normal_word));
        return it == index_.end() ? npos : it->second;
    }

    /// Index of the Coxeter part of g; throws RadiusExceeded outside the ball.
    std::uint32_t index_of(const GroupElement& g) const {
        group_->check(g);
        if (g.length() > radius_)
            throw RadiusExceeded("element " + format_element(g) + " has length " + std::to_string(g.length()) +
                                 " > radius " + std::to_string(radius_));
        return find(g.word);
    }

    GroupElement element(std::uint32_t i, int omega = 0) const { return group_->element(words_[i], omega); }

private:
    static std::string key(const std::vector<std::uint8_t>& w) { return std::string(w.begin(), w.end()); }

    GroupHandle group_;
    int radius_;
    std::vector<std::vector<std::uint8_t>> words_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::uint32_t> left_, right_;
    std::vector<unsigned> left_desc_, right_desc_;
    std::vector<std::uint32_t> inverse_;
    std::vector<std::uint32_t> layer_start_;
};

}  // namespace heckej
