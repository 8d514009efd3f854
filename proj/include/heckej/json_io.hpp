#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <iterator>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "heckej/error.hpp"
#include "heckej/kl_table.hpp"
#include "heckej/laurent.hpp"
#include "heckej/weyl.hpp"

namespace heckej {

using json = nlohmann::json;

/// [[exponent, "coefficient"], ...] sorted by exponent.
inline json to_json(const LaurentInt& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back(json::array({e, c.str()}));
    return out;
}

inline LaurentInt laurent_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("Laurent polynomial must be a JSON array");
    std::vector<LaurentInt::term_type> terms;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_string())
            throw ParseError("Laurent term must be [exponent, \"coefficient\"]");
        terms.emplace_back(t[0].get<int>(), parse_bigint(t[1].get<std::string>()));
    }
    return LaurentInt::from_terms(std::move(terms));
}

inline json to_json(const GroupElement& g) {
    json word = json::array();
    for (auto s : g.word) word.push_back(static_cast<int>(s));
    return {{"word", word}, {"omega", static_cast<int>(g.omega)}};
}

inline GroupElement element_from_json(const json& j, const Group& group) {
    if (!j.is_object() || !j.contains("word") || !j["word"].is_array())
        throw ParseError("element must be {\"word\":[...],\"omega\":k}");
    std::vector<std::uint8_t> word;
    for (const auto& s : j["word"]) {
        int v = s.get<int>();
        if (v < 0 || v >= group.rank()) throw ParseError("generator index " + std::to_string(v) + " out of range");
        word.push_back(static_cast<std::uint8_t>(v));
    }
    int omega = j.value("omega", 0);
    GroupElement g = group.element(word, omega);
    if (g.word != word) throw ParseError("element word is not in normal form");
    return g;
}

inline json to_json(const GroupDescriptor& d) {
    return {{"type", d.label()}, {"extended", d.extended}};
}

/// Stable 64-bit FNV-1a of the descriptor's canonical JSON text.
inline std::uint64_t descriptor_hash(const GroupDescriptor& d) {
    std::string text = to_json(d).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) h = (h ^ c) * 1099511628211ull;
    return h;
}

/// Versioned KL table file:
/// {"version":1,"group":{...},"radius":N,"entries":[{"y":elt,"w":elt,"P":laurent}]}
/// with one entry per y < w with P_{y,w} nonzero, in (w, y) index order.
/// Written as nlohmann's compact dump of that document would be (keys sorted).
inline void write_kl_table(std::ostream& os, const KLTable& t) {
    const Ball& b = t.ball();
    std::string out;
    auto put_int = [&](long long v) {
        char buf[24];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, res.ptr);
    };
    auto element = [&](std::uint32_t i) {
        out += "{\"omega\":0,\"word\":[";
        const auto& w = b.word(i);
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (k) out += ',';
            put_int(w[k]);
        }
        out += "]}";
    };
    out += "{\"entries\":[";
    bool first = true;
    for (std::uint32_t w = 0; w < b.size(); ++w) {
        for (std::uint32_t y = 0; y < b.count_below(b.length(w)); ++y) {
            const QPoly& p = t.poly(y, w);
            if (p.empty()) continue;
            out += first ? "{\"P\":[" : ",{\"P\":[";
            first = false;
            bool first_term = true;
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (p[k] == 0) continue;
                out += first_term ? "[" : ",[";
                first_term = false;
                put_int(static_cast<long long>(2 * k));
                out += ",\"";
                out += p[k].str();
                out += "\"]";
            }
            out += "],\"w\":";
            element(w);
            out += ",\"y\":";
            element(y);
            out += '}';
        }
        if (out.size() > (1u << 20)) {
            os << out;
            out.clear();
        }
    }
    out += "],\"group\":" + to_json(t.group()->descriptor()).dump() + ",\"radius\":";
    put_int(t.radius());
    out += ",\"version\":1}";
    os << out;
}

inline json kl_table_to_json(const KLTable& t) {
    std::ostringstream s;
    write_kl_table(s, t);
    return json::parse(s.str());
}

namespace detail {

/// Streaming reader for the KL table file; builds entries without a DOM.
class KLTableSax : public nlohmann::json_sax<json> {
public:
    struct Entry {
        std::vector<std::uint8_t> y, w;
        int y_omega = 0, w_omega = 0;
        std::vector<std::pair<long long, std::string>> terms;
        bool has_y = false, has_w = false, has_p = false;
    };

    std::optional<int> version, radius;
    std::optional<std::string> type;
    std::optional<bool> extended;
    std::vector<Entry> entries;
    std::string error;

    bool null() override { return fail("unexpected null"); }
    bool boolean(bool v) override {
        if (!at({"group"}, "extended")) return fail("unexpected boolean");
        extended = v;
        return true;
    }
    bool number_integer(number_integer_t v) override { return integer(v); }
    bool number_unsigned(number_unsigned_t v) override { return integer(static_cast<long long>(v)); }
    bool number_float(number_float_t, const string_t&) override { return fail("unexpected number"); }
    bool string(string_t& v) override {
        if (at({"group"}, "type")) {
            type = v;
            return true;
        }
        if (at({"entries", "[]", "P", "[]"}) && term_pos_ == 1) {
            entries.back().terms.back().second = v;
            ++term_pos_;
            return true;
        }
        return fail("unexpected string");
    }
    bool binary(binary_t&) override { return fail("unexpected binary value"); }
    bool key(string_t& k) override {
        key_ = k;
        return true;
    }
    bool start_object(std::size_t) override {
        open(true);
        if (at({"entries", "[]"})) entries.emplace_back();
        return true;
    }
    bool end_object() override {
        if (at({"entries", "[]"})) {
            const Entry& e = entries.back();
            if (!e.has_y || !e.has_w || !e.has_p) return fail("entry needs y, w and P");
        }
        frames_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        open(false);
        if (at({"entries", "[]", "y", "word"})) {
            entries.back().has_y = true;
        } else if (at({"entries", "[]", "w", "word"})) {
            entries.back().has_w = true;
        } else if (at({"entries", "[]", "P"})) {
            entries.back().has_p = true;
        } else if (at({"entries", "[]", "P", "[]"})) {
            entries.back().terms.emplace_back(0, "");
            term_pos_ = 0;
        }
        return true;
    }
    bool end_array() override {
        if (at({"entries", "[]", "P", "[]"}) && term_pos_ != 2) return fail("Laurent term must be [exponent, \"coefficient\"]");
        frames_.pop_back();
        return true;
    }
    bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) override {
        error = "at byte " + std::to_string(pos) + ": " + ex.what();
        return false;
    }

private:
    struct Frame {
        std::string name;  // member key, or "[]" for an array element
        bool object = false;
    };

    // Names the new container after the pending key or as an array element.
    void open(bool object) {
        std::string name = frames_.empty() ? "" : (frames_.back().object ? key_ : "[]");
        frames_.push_back({std::move(name), object});
    }

    // The open containers below the root are `names`; for scalars `member`
    // is the key inside the innermost object.
    bool at(std::initializer_list<const char*> names, const char* member = nullptr) const {
        if (frames_.size() != names.size() + 1) return false;
        std::size_t i = 1;
        for (const char* n : names)
            if (frames_[i++].name != n) return false;
        return member == nullptr || key_ == member;
    }

    std::vector<std::uint8_t>* element_word() {
        if (at({"entries", "[]", "y", "word"})) return &entries.back().y;
        if (at({"entries", "[]", "w", "word"})) return &entries.back().w;
        return nullptr;
    }

    bool integer(long long v) {
        if (at({}, "version")) {
            version = static_cast<int>(v);
        } else if (at({}, "radius")) {
            radius = static_cast<int>(v);
        } else if (auto* word = element_word()) {
            if (v < 0 || v > 255) return fail("generator index out of range");
            word->push_back(static_cast<std::uint8_t>(v));
        } else if (at({"entries", "[]", "y"}, "omega")) {
            entries.back().y_omega = static_cast<int>(v);
        } else if (at({"entries", "[]", "w"}, "omega")) {
            entries.back().w_omega = static_cast<int>(v);
        } else if (at({"entries", "[]", "P", "[]"}) && term_pos_ == 0) {
            entries.back().terms.back().first = v;
            ++term_pos_;
        } else {
            return fail("unexpected integer");
        }
        return true;
    }

    bool fail(const std::string& what) {
        error = what;
        return false;
    }

    std::vector<Frame> frames_;
    std::string key_;
    int term_pos_ = 0;
};

/// Reads the canonical compact layout written by write_kl_table directly.
/// Returns false on any deviation, leaving the generic parser to decide.
inline bool read_canonical_kl_table(const std::string& text, KLTableSax& out) {
    const char* p = text.data();
    const char* end = p + text.size();
    auto lit = [&](std::string_view s) {
        if (static_cast<std::size_t>(end - p) < s.size() || std::string_view(p, s.size()) != s) return false;
        p += s.size();
        return true;
    };
    auto integer = [&](long long& v) {
        auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc()) return false;
        p = res.ptr;
        return true;
    };
    auto string = [&](std::string& v) {
        if (!lit("\"")) return false;
        const char* q = p;
        while (q < end && *q != '"' && *q != '\\') ++q;
        if (q == end || *q != '"') return false;
        v.assign(p, q);
        p = q + 1;
        return true;
    };
    auto element = [&](std::vector<std::uint8_t>& word, int& omega) {
        long long o = 0;
        if (!lit("{\"omega\":") || !integer(o) || !lit(",\"word\":[")) return false;
        omega = static_cast<int>(o);
        if (lit("]")) return lit("}");
        do {
            long long s = 0;
            if (!integer(s) || s < 0 || s > 255) return false;
            word.push_back(static_cast<std::uint8_t>(s));
        } while (lit(","));
        return lit("]") && lit("}");
    };
    if (!lit("{\"entries\":[")) return false;
    if (!lit("]")) {
        do {
            KLTableSax::Entry e;
            if (!lit("{\"P\":[")) return false;
            if (!lit("]")) {
                do {
                    long long ex = 0;
                    std::string c;
                    if (!lit("[") || !integer(ex) || !lit(",") || !string(c) || !lit("]")) return false;
                    e.terms.emplace_back(ex, std::move(c));
                } while (lit(","));
                if (!lit("]")) return false;
            }
            if (!lit(",\"w\":") || !element(e.w, e.w_omega) || !lit(",\"y\":") || !element(e.y, e.y_omega) || !lit("}"))
                return false;
            e.has_p = e.has_w = e.has_y = true;
            out.entries.push_back(std::move(e));
        } while (lit(","));
        if (!lit("]")) return false;
    }
    long long radius = 0, version = 0;
    std::string type;
    bool extended;
    if (!lit(",\"group\":{\"extended\":")) return false;
    if (lit("true")) extended = true;
    else if (lit("false")) extended = false;
    else return false;
    if (!lit(",\"type\":") || !string(type) || !lit("},\"radius\":") || !integer(radius) || !lit(",\"version\":") ||
        !integer(version) || !lit("}"))
        return false;
    while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
    if (p != end) return false;
    out.type = type;
    out.extended = extended;
    out.radius = static_cast<int>(radius);
    out.version = static_cast<int>(version);
    return true;
}

}  // namespace detail

inline std::shared_ptr<const KLTable> read_kl_table(std::istream& in, GroupHandle group) {
    // the contiguous-buffer lexer is several times faster than the stream one
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    detail::KLTableSax sax;
    if (!detail::read_canonical_kl_table(text, sax)) {
        sax = detail::KLTableSax();
        if (!json::sax_parse(text, &sax)) throw ParseError("malformed KL cache: " + sax.error);
    }
    if (sax.version != 1) throw ParseError("unsupported KL cache version");
    if (!sax.type || !sax.extended || !sax.radius) throw ParseError("KL cache lacks group or radius");
    GroupDescriptor d = GroupDescriptor::parse(*sax.type, *sax.extended);
    if (d != group->descriptor()) throw GroupMismatch("KL cache was written for " + d.label());
    int radius = *sax.radius;
    if (radius < 0) throw ParseError("negative radius in KL cache");
    Ball probe(group, radius);
    std::vector<std::tuple<std::uint32_t, std::uint32_t, QPoly>> entries;
    entries.reserve(sax.entries.size());
    for (auto& e : sax.entries) {
        std::uint32_t y = probe.find(e.y), w = probe.find(e.w);
        if (y == Ball::npos || w == Ball::npos) throw ParseError("KL cache entry outside the ball or not in normal form");
        if (e.y_omega != 0 || e.w_omega != 0) throw ParseError("KL cache entries must have omega 0");
        QPoly qp;
        for (auto& [ex, c] : e.terms) {
            if (ex < 0 || ex % 2 != 0) throw ParseError("KL polynomial with odd or negative v-exponent");
            auto k = static_cast<std::size_t>(ex / 2);
            if (qp.size() <= k) qp.resize(k + 1);
            qp[k] = parse_bigint(c);
        }
        detail::trim(qp);
        entries.emplace_back(y, w, std::move(qp));
    }
    return std::make_shared<const KLTable>(std::move(group), radius, entries);
}

inline std::shared_ptr<const KLTable> kl_table_from_json(const json& j, GroupHandle group) {
    std::istringstream in(j.dump());
    return read_kl_table(in, std::move(group));
}

/// Directory-backed store of KL tables, one file per (descriptor, radius).
class KLCache {
public:
    explicit KLCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path path_for(const GroupDescriptor& d, int radius) const {
        std::ostringstream name;
        name << "kl_" << std::hex << descriptor_hash(d) << std::dec << "_r" << radius << ".json";
        return dir_ / name.str();
    }

    /// Loads the table if a file exists, otherwise computes and stores it.
    std::shared_ptr<const KLTable> get(GroupHandle group, int radius) const {
        auto path = path_for(group->descriptor(), radius);
        if (std::filesystem::exists(path)) {
            std::ifstream in(path, std::ios::binary);
            try {
                return read_kl_table(in, std::move(group));
            } catch (const ParseError& e) {
                throw ParseError("corrupt KL cache " + path.string() + ": " + e.what());
            }
        }
        auto table = std::make_shared<const KLTable>(group, radius);
        std::filesystem::create_directories(dir_);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            write_kl_table(out, *table);
        }
        std::filesystem::rename(tmp, path);
        return table;
    }

private:
    std::filesystem::path dir_;
};

}  // namespace heckej
