#pragma once

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heckej/asymptotic.hpp"
#include "heckej/hecke.hpp"
#include "heckej/json_io.hpp"
#include "heckej/sl2.hpp"

namespace heckej::cli {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kRefused = 3 };

/// Raised when a value exists but cannot be certified at the requested radius.
class Uncertified : public Error {
public:
    using Error::Error;
};

enum class Format { Table, Json, Csv };

/// Collects records and prints them as an aligned table, CSV or JSON lines.
/// `columns` picks the fields shown in table and CSV form; JSON shows all.
class Emitter {
public:
    Emitter(Format fmt, std::vector<std::string> columns) : fmt_(fmt), columns_(std::move(columns)) {}

    void add(json record) { records_.push_back(std::move(record)); }

    void print(std::ostream& out) const {
        if (fmt_ == Format::Json) {
            for (const auto& r : records_) out << r.dump() << "\n";
            return;
        }
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : records_) {
            std::vector<std::string> row;
            for (const auto& c : columns_) row.push_back(render(r.contains(c) ? r[c] : json()));
            rows.push_back(std::move(row));
        }
        if (fmt_ == Format::Csv) {
            print_csv_row(out, columns_);
            for (const auto& row : rows) print_csv_row(out, row);
            return;
        }
        for (auto& row : rows)
            for (auto& cell : row)
                if (cell.empty()) cell = "-";
        std::vector<std::size_t> width;
        for (const auto& c : columns_) width.push_back(c.size());
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) s += "  ";
                s += cells[i];
                if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size(), ' ');
            }
            out << s << "\n";
        };
        line(columns_);
        for (const auto& row : rows) line(row);
    }

private:
    static std::string render(const json& v) {
        if (v.is_null()) return "-";
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }

    static void print_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ",";
            const auto& c = cells[i];
            if (c.find_first_of(",\"\n") == std::string::npos) {
                out << c;
                continue;
            }
            out << '"';
            for (char ch : c) {
                if (ch == '"') out << '"';
                out << ch;
            }
            out << '"';
        }
        out << "\n";
    }

    Format fmt_;
    std::vector<std::string> columns_;
    std::vector<json> records_;
};

struct Options {
    std::string type = "A1~";
    bool extended = false;
    std::string basis = "signed";
    std::string format = "table";
    std::string cache_dir;
    bool allow_uncertified = false;
};

inline Format parse_format(const std::string& f) {
    if (f == "table") return Format::Table;
    if (f == "json") return Format::Json;
    if (f == "csv") return Format::Csv;
    throw ParseError("unknown format '" + f + "'");
}

inline SignConvention parse_sign(const std::string& b) {
    if (b == "signed") return SignConvention::Signed;
    if (b == "unsigned") return SignConvention::Unsigned;
    throw ParseError("unknown basis '" + b + "' (expected signed or unsigned)");
}

inline std::string element_text(const GroupElement& g) {
    return format_element(g);
}

/// Shared state for one invocation.
class Session {
public:
    explicit Session(const Options& o)
        : opts(o), fmt(parse_format(o.format)), sign(parse_sign(o.basis)),
          group(make_group(GroupDescriptor::parse(o.type, o.extended))) {
        std::string dir = o.cache_dir;
        if (dir.empty()) {
            if (const char* env = std::getenv("HECKEJ_CACHE_DIR")) dir = env;
        }
        if (!dir.empty()) cache.emplace(dir);
    }

    std::shared_ptr<const KLTable> table(int radius) const {
        if (radius < 0) throw ParseError("radius must be non-negative");
        if (cache) return cache->get(group, radius);
        return std::make_shared<const KLTable>(group, radius);
    }

    std::unique_ptr<AsymptoticContext> context(int scan_radius) const {
        return std::make_unique<AsymptoticContext>(table(2 * scan_radius), scan_radius);
    }

    /// Scan radius that certifies a-values up to the given length.
    int scan_for(int length) const { return certification_bound(group->descriptor(), length); }

    GroupElement parse(const std::string& text) const { return group->parse(text); }

    json meta(bool certified, std::optional<int> radius, bool with_basis = true) const {
        json m;
        m["certified"] = certified;
        m["radius"] = radius ? json(*radius) : json();
        m["basis"] = with_basis ? json(to_string(sign)) : json();
        return m;
    }

    Options opts;
    Format fmt;
    SignConvention sign;
    GroupHandle group;
    std::optional<KLCache> cache;
};

inline json record(const json& meta, std::initializer_list<std::pair<const std::string, json>> fields) {
    json r = meta;
    for (const auto& [k, v] : fields) r[k] = v;
    return r;
}

/// Parses "01 + 2*10 - 3*e" into a J combination.
inline JElement parse_j(const Session& s, const std::string& text) {
    JElement j;
    std::string t;
    for (char c : text)
        if (c != ' ') t.push_back(c);
    std::size_t i = 0;
    while (i < t.size()) {
        int sgn = 1;
        if (t[i] == '+' || t[i] == '-') {
            sgn = t[i] == '-' ? -1 : 1;
            ++i;
        }
        std::size_t end = t.find_first_of("+-", i);
        std::string term = t.substr(i, end == std::string::npos ? std::string::npos : end - i);
        BigInt c = 1;
        auto star = term.find('*');
        if (star != std::string::npos) {
            c = parse_bigint(term.substr(0, star));
            term = term.substr(star + 1);
        }
        j.add(s.parse(term), c * sgn);
        if (end == std::string::npos) break;
        i = end;
    }
    return j;
}

inline std::string q_text(const QPoly& p) {
    std::vector<Rational> c(p.begin(), p.end());
    RationalPoly out;
    for (std::size_t k = 0; k < c.size(); ++k) out = out + RationalPoly::monomial(c[k], static_cast<int>(k));
    return out.to_string();
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kazhdan-Lusztig polynomials, the asymptotic Hecke algebra J, and the SL(2) appendix identities"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c, bool group_opts) {
        if (group_opts) {
            c->add_option("--type", o.type, "affine type: A1~ or A2~")->capture_default_str();
            c->add_flag("--extended", o.extended, "adjoin the length-zero group Omega");
            c->add_option("--basis", o.basis, "signed (paper's C) or unsigned (C')")->capture_default_str();
            c->add_option("--cache-dir", o.cache_dir, "KL table cache directory (env HECKEJ_CACHE_DIR)");
        }
        c->add_option("--format", o.format, "table, json or csv")->capture_default_str();
    };

    int radius = -1, scan = -1, max_total = 5, rank_len = -1, R = 50, N = 10, n = 0, r = 0, m = 4;
    unsigned p = 2;
    std::uint64_t budget = 10'000'000;
    std::string x, y, z, w, q_text_opt, lattice = "std", in_basis = "C", qs = "2,3,4";
    bool allow = false;
    bool have_n = false;

    auto* c_group = app.add_subcommand("group", "list the elements of a ball");
    common(c_group, true);
    c_group->add_option("--radius", radius, "maximal length")->required();

    auto* c_kl = app.add_subcommand("kl", "Kazhdan-Lusztig polynomial P_{y,w}");
    common(c_kl, true);
    c_kl->add_option("--y", y, "element y")->required();
    c_kl->add_option("--w", w, "element w")->required();
    c_kl->add_option("--radius", radius, "KL table radius (default l(w))");

    auto* c_hmul = app.add_subcommand("hmul", "product of two basis elements of the Hecke algebra");
    common(c_hmul, true);
    c_hmul->add_option("--x", x)->required();
    c_hmul->add_option("--y", y)->required();
    c_hmul->add_option("--in", in_basis, "T, Ttilde or C (C follows --basis)")->capture_default_str();

    auto* c_hconst = app.add_subcommand("hconst", "structure constants h_{x,y,z}");
    common(c_hconst, true);
    c_hconst->add_option("--x", x)->required();
    c_hconst->add_option("--y", y)->required();

    auto* c_afn = app.add_subcommand("afn", "a-function value a(z)");
    common(c_afn, true);
    c_afn->add_option("--z", z)->required();
    c_afn->add_option("--scan", scan, "scan radius (default: certification bound)");
    c_afn->add_flag("--allow-uncertified", allow, "print values below the certification bound");

    auto* c_gamma = app.add_subcommand("gamma", "gamma_{x,y,z}");
    common(c_gamma, true);
    c_gamma->add_option("--x", x)->required();
    c_gamma->add_option("--y", y)->required();
    c_gamma->add_option("--z", z)->required();
    c_gamma->add_option("--scan", scan, "scan radius (default: enough to certify a(z))");

    auto* c_jmul = app.add_subcommand("jmul", "product in J, e.g. --x \"01\" --y \"10 + 2*0\"");
    common(c_jmul, true);
    c_jmul->add_option("--x", x)->required();
    c_jmul->add_option("--y", y)->required();

    auto* c_dinv = app.add_subcommand("dinv", "distinguished involutions up to a length");
    common(c_dinv, true);
    c_dinv->add_option("--radius", radius)->required();

    auto* c_phi = app.add_subcommand("phi", "image of C_x in J tensor A");
    common(c_phi, true);
    c_phi->add_option("--x", x)->required();
    c_phi->add_option("--radius", radius, "keep d with l(x) + l(d) <= radius (default l(x) + 2 l(w0))");
    c_phi->add_option("--q", q_text_opt, "also specialize at v = q^{1/2}");

    auto* c_phicheck = app.add_subcommand("phi-check", "verify phi(C_x) phi(C_y) = phi(C_x C_y) and specialized rank");
    common(c_phicheck, true);
    c_phicheck->add_option("--max-total", max_total, "check pairs with l(x) + l(y) <= this")->capture_default_str();
    c_phicheck->add_option("--radius", radius, "phi radius (default max-total + 2 (2 l(w0) - 1))");
    c_phicheck->add_option("--rank-length", rank_len, "also check full rank on the ball of this length");
    c_phicheck->add_option("--q", qs, "comma-separated q values for the rank check")->capture_default_str();

    auto* c_sl2 = app.add_subcommand("sl2", "SL(2) appendix computations");
    c_sl2->require_subcommand(1);
    auto* s_gamma = c_sl2->add_subcommand("gamma", "coefficient gamma_n of f");
    common(s_gamma, false);
    s_gamma->add_option("--n", n)->required();
    auto* s_volume = c_sl2->add_subcommand("volume", "vol(X_n) / vol(K)");
    common(s_volume, false);
    s_volume->add_option("--n", n)->required();
    auto* s_conv = c_sl2->add_subcommand("conv", "(f * chi_L)(t^-r, 0), or a single cell with --n");
    common(s_conv, false);
    s_conv->add_option("--r", r)->required();
    s_conv->add_option("--lattice", lattice, "std (O+O) or sub (O+tO)")->capture_default_str();
    auto* conv_n = s_conv->add_option("--n", n, "single cell X_n instead of f");
    auto* s_verify = c_sl2->add_subcommand("verify", "relations rel1, rel2 and the convolution identities");
    common(s_verify, false);
    s_verify->add_option("--R", R)->capture_default_str();
    auto* s_count = c_sl2->add_subcommand("count", "brute-force count in SL(2, Z/p^m)");
    common(s_count, false);
    s_count->add_option("--p", p)->required();
    s_count->add_option("--m", m)->required();
    s_count->add_option("--n", n)->required();
    s_count->add_option("--r", r)->required();
    s_count->add_option("--lattice", lattice)->capture_default_str();
    s_count->add_option("--budget", budget, "maximal number of enumerated triples")->capture_default_str();
    auto* s_decay = c_sl2->add_subcommand("decay", "q^{|n|} |gamma_n| <= q for |n| <= N");
    common(s_decay, false);
    s_decay->add_option("--q", q_text_opt)->required();
    s_decay->add_option("--N", N)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    have_n = conv_n->count() > 0;
    o.allow_uncertified = allow;

    try {
        Session s(o);
        auto result_line = [&](std::size_t pass, std::size_t fail) {
            out << "RESULT pass=" << pass << " fail=" << fail << "\n";
            return fail == 0 ? kOk : kVerifyFailed;
        };

        if (c_group->parsed()) {
            Emitter e(s.fmt, {"element", "length", "left_descents", "right_descents"});
            for (const auto& g : s.group->enumerate_ball(radius)) {
                auto mask = [&](unsigned bits) {
                    std::string t;
                    for (int i = 0; i < s.group->rank(); ++i)
                        if (bits >> i & 1u) t.push_back(static_cast<char>('0' + i));
                    return t;
                };
                e.add(record(s.meta(true, radius, false), {{"element", element_text(g)},
                                                           {"element_elt", to_json(g)},
                                                           {"length", g.length()},
                                                           {"left_descents", mask(s.group->left_descents(g))},
                                                           {"right_descents", mask(s.group->right_descents(g))}}));
            }
            e.print(out);
            return kOk;
        }

        if (c_kl->parsed()) {
            GroupElement gy = s.parse(y), gw = s.parse(w);
            int rad = radius >= 0 ? radius : gw.length();
            auto t = s.table(rad);
            LaurentInt P = kl_polynomial(gy, gw, *t);
            std::string ptext;
            {
                QPoly qp;
                for (const auto& [ex, c] : P.terms()) {
                    qp.resize(static_cast<std::size_t>(ex / 2) + 1);
                    qp[static_cast<std::size_t>(ex / 2)] = c;
                }
                ptext = q_text(qp);
            }
            Emitter e(s.fmt, {"y", "w", "P"});
            e.add(record(s.meta(true, rad, false), {{"y", element_text(gy)},
                                                    {"w", element_text(gw)},
                                                    {"y_elt", to_json(gy)},
                                                    {"w_elt", to_json(gw)},
                                                    {"P", ptext},
                                                    {"P_v", to_json(P)}}));
            e.print(out);
            return kOk;
        }

        if (c_hmul->parsed() || c_hconst->parsed()) {
            GroupElement gx = s.parse(x), gy = s.parse(y);
            int rad = gx.length() + gy.length();
            auto t = s.table(rad);
            Emitter e(s.fmt, {"z", "coeff"});
            if (c_hmul->parsed()) {
                HeckeAlgebra H(t);
                Basis b = parse_basis(in_basis);
                if (b == Basis::Csigned || b == Basis::Cprime) b = c_basis(s.sign);
                auto prod = H.multiply(H.basis_element(b, gx), H.basis_element(b, gy));
                for (const auto& [g, c] : prod.terms)
                    e.add(record(s.meta(true, rad), {{"hecke_basis", to_string(b)},
                                                     {"z", element_text(g)},
                                                     {"z_elt", to_json(g)},
                                                     {"coeff", c.to_string()},
                                                     {"coeff_v", to_json(c)}}));
            } else {
                ProductEngine engine(t);
                for (const auto& [g, c] : h_constants(gx, gy, s.sign, engine))
                    e.add(record(s.meta(true, rad), {{"z", element_text(g)},
                                                     {"z_elt", to_json(g)},
                                                     {"coeff", c.to_string()},
                                                     {"coeff_v", to_json(c)}}));
            }
            e.print(out);
            return kOk;
        }

        if (c_afn->parsed()) {
            GroupElement gz = s.parse(z);
            int S = scan >= 0 ? scan : s.scan_for(gz.length());
            auto ctx = s.context(S);
            AValue a = ctx->a_value(gz, S);
            if (!a.certified && !allow)
                throw Uncertified("a(" + element_text(gz) + ") at scan radius " + std::to_string(S) +
                                  " is below the certification bound " +
                                  std::to_string(s.scan_for(gz.length())) + "; pass --allow-uncertified to print it");
            Emitter e(s.fmt, {"z", "a", "scan", "certified"});
            e.add(record(s.meta(a.certified, S, false),
                         {{"z", element_text(gz)}, {"z_elt", to_json(gz)}, {"a", a.value}, {"scan", S}}));
            e.print(out);
            return kOk;
        }

        if (c_gamma->parsed()) {
            GroupElement gx = s.parse(x), gy = s.parse(y), gz = s.parse(z);
            int S = scan >= 0 ? scan : std::max(s.scan_for(gz.length()), (gx.length() + gy.length() + 1) / 2);
            auto ctx = s.context(S);
            BigInt g = ctx->gamma(gx, gy, gz, s.sign);
            Emitter e(s.fmt, {"x", "y", "z", "gamma"});
            e.add(record(s.meta(true, ctx->certified_length()), {{"x", element_text(gx)},
                                                                 {"y", element_text(gy)},
                                                                 {"z", element_text(gz)},
                                                                 {"gamma", g.str()}}));
            e.print(out);
            return kOk;
        }

        if (c_jmul->parsed()) {
            JElement a = parse_j(s, x), b = parse_j(s, y);
            int la = 0, lb = 0;
            for (const auto& [g, c] : a.terms) la = std::max(la, g.length());
            for (const auto& [g, c] : b.terms) lb = std::max(lb, g.length());
            auto ctx = s.context(s.scan_for(la + lb));
            JElement prod = ctx->j_multiply(a, b, s.sign);
            Emitter e(s.fmt, {"z", "coeff"});
            for (const auto& [g, c] : prod.terms)
                e.add(record(s.meta(true, prod.radius), {{"z", element_text(g)}, {"z_elt", to_json(g)}, {"coeff", c.str()}}));
            e.print(out);
            return kOk;
        }

        if (c_dinv->parsed()) {
            auto ctx = s.context(s.scan_for(radius));
            Emitter e(s.fmt, {"d", "length", "a"});
            for (const auto& d : ctx->distinguished_involutions(radius))
                e.add(record(s.meta(true, radius, false), {{"d", element_text(d)},
                                                           {"d_elt", to_json(d)},
                                                           {"length", d.length()},
                                                           {"a", ctx->a_value(d).value}}));
            e.print(out);
            return kOk;
        }

        if (c_phi->parsed()) {
            GroupElement gx = s.parse(x);
            int rad = radius >= 0 ? radius : gx.length() + 2 * s.group->descriptor().finite_longest_length();
            auto ctx = s.context(s.scan_for(rad));
            auto img = ctx->phi(gx, rad, s.sign);
            std::optional<Rational> q;
            if (!q_text_opt.empty()) {
                q = parse_rational(q_text_opt);
                if (*q <= 0) throw ParseError("--q must be positive");
            }
            std::vector<std::string> cols{"z", "coeff"};
            if (q) cols.insert(cols.end(), {"a0", "a1"});
            Emitter e(s.fmt, cols);
            for (const auto& [g, c] : img.terms) {
                json rec = record(s.meta(true, rad),
                                  {{"z", element_text(g)}, {"z_elt", to_json(g)}, {"coeff", c.to_string()}, {"coeff_v", to_json(c)}});
                if (q) {
                    QuadExt sp = specialize(c, *q);
                    rec["q"] = to_string(*q);
                    rec["a0"] = to_string(sp.a0);
                    rec["a1"] = to_string(sp.a1);
                }
                e.add(std::move(rec));
            }
            e.print(out);
            return kOk;
        }

        if (c_phicheck->parsed()) {
            int w0 = s.group->descriptor().finite_longest_length();
            int rad = radius >= 0 ? radius : max_total + 2 * (2 * w0 - 1);
            if (rank_len >= 0) rad = std::max(rad, rank_len + 2 * w0);
            auto ctx = s.context(s.scan_for(rad));
            const Ball& b = ctx->ball();
            std::vector<std::string> failures;
            std::size_t pass = 0;
            std::map<GroupElement, JTensorAElement> memo;
            auto phi = [&](const GroupElement& g) -> const JTensorAElement& {
                auto it = memo.find(g);
                if (it == memo.end()) it = memo.emplace(g, ctx->phi(g, rad, s.sign)).first;
                return it->second;
            };
            std::vector<GroupElement> ball = s.group->enumerate_ball(max_total);
            for (const auto& gx : ball) {
                for (const auto& gy : ball) {
                    if (gx.length() + gy.length() > max_total) continue;
                    auto lhs = ctx->multiply(phi(gx), phi(gy), s.sign);
                    auto rhs = ctx->phi(h_constants(gx, gy, s.sign, ctx->engine()), rad, s.sign);
                    if (lhs.same_terms(rhs)) ++pass;
                    else failures.push_back("phi(" + element_text(gx) + ") phi(" + element_text(gy) + ")");
                }
            }
            Emitter e(s.fmt, {"check", "count", "failures"});
            json fl = json::array();
            for (std::size_t i = 0; i < failures.size() && i < 10; ++i) fl.push_back(failures[i]);
            e.add(record(s.meta(true, rad), {{"check", "homomorphism"}, {"count", pass + failures.size()},
                                             {"failures", failures.size()}, {"first_failures", fl}}));
            std::size_t rank_pass = 0, rank_fail = 0;
            if (rank_len >= 0) {
                std::vector<GroupElement> xs;
                for (std::uint32_t i = 0; i < b.count_below(rank_len + 1); ++i) xs.push_back(b.element(i));
                std::stringstream ss(qs);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    Rational q = parse_rational(item);
                    std::size_t rk = ctx->phi_rank(xs, q, rad, s.sign);
                    bool ok = rk == xs.size();
                    (ok ? rank_pass : rank_fail)++;
                    e.add(record(s.meta(true, rad), {{"check", "rank q=" + to_string(q)},
                                                     {"count", xs.size()},
                                                     {"failures", ok ? 0 : 1},
                                                     {"rank", rk}}));
                }
            }
            e.print(out);
            for (std::size_t i = 0; i < failures.size() && i < 10; ++i) err << "counterexample: " << failures[i] << "\n";
            return result_line(pass + rank_pass, failures.size() + rank_fail);
        }

        // sl2
        auto sl2_meta = [&](std::optional<int> rad) { return s.meta(true, rad, false); };
        if (s_gamma->parsed() || s_volume->parsed()) {
            bool is_gamma = s_gamma->parsed();
            RatFunc v = is_gamma ? sl2::gamma_n(n) : sl2::volume_ratio(n);
            Emitter e(s.fmt, {"n", "value"});
            e.add(record(sl2_meta(std::nullopt), {{"n", n}, {"value", v.to_string()}}));
            e.print(out);
            return kOk;
        }
        if (s_conv->parsed()) {
            auto L = sl2::parse_lattice(lattice);
            RatFunc v = have_n ? sl2::conv_cell_value(n, r, L) : sl2::conv_f_value(r, L);
            Emitter e(s.fmt, {"r", "lattice", "value"});
            json rec = record(sl2_meta(std::nullopt), {{"r", r}, {"lattice", sl2::to_string(L)}, {"value", v.to_string()}});
            rec["n"] = have_n ? json(n) : json();
            e.add(std::move(rec));
            e.print(out);
            return kOk;
        }
        if (s_verify->parsed()) {
            sl2::Report rep = sl2::verify_relations(R);
            const RatFunc q1 = RatFunc::q() + RatFunc(1);
            for (int rr = -5; rr <= 5; ++rr) {
                RatFunc a = sl2::conv_f_value(rr, sl2::Lattice::Std);
                rep.checks.push_back({"conv_std", rr, a == (rr <= 0 ? q1 : RatFunc(0)), a.to_string()});
                RatFunc b = sl2::conv_f_value(rr, sl2::Lattice::Sub);
                rep.checks.push_back({"conv_sub", rr, b.is_zero(), b.to_string()});
            }
            Emitter e(s.fmt, {"check", "r", "pass", "value"});
            for (const auto& c : rep.checks)
                e.add(record(sl2_meta(R), {{"check", c.name}, {"r", c.r}, {"pass", c.pass}, {"value", c.value}}));
            e.print(out);
            int shown = 0;
            for (const auto& c : rep.checks)
                if (!c.pass && shown++ < 10) err << "counterexample: " << c.name << " r=" << c.r << " value " << c.value << "\n";
            return result_line(rep.passed(), rep.failed());
        }
        if (s_count->parsed()) {
            auto L = sl2::parse_lattice(lattice);
            sl2::CountingOracle oracle(budget);
            Rational f = oracle.count(p, m, n, r, L);
            Rational predicted = sl2::conv_cell_value(n, r, L).evaluate(p);
            Rational via_count = sl2::volume_ratio(n).evaluate(p) * Rational(p + 1) * f;
            Emitter e(s.fmt, {"p", "m", "n", "r", "lattice", "fraction", "cell_value", "table_value"});
            e.add(record(sl2_meta(m), {{"p", p},
                                       {"m", m},
                                       {"n", n},
                                       {"r", r},
                                       {"lattice", sl2::to_string(L)},
                                       {"fraction", to_string(f)},
                                       {"cell_value", to_string(via_count)},
                                       {"table_value", to_string(predicted)},
                                       {"enumerated", oracle.enumerated()}}));
            e.print(out);
            return result_line(via_count == predicted ? 1 : 0, via_count == predicted ? 0 : 1);
        }
        if (s_decay->parsed()) {
            Rational q = parse_rational(q_text_opt);
            auto rep = sl2::schwartz_decay_check(N, q);
            Emitter e(s.fmt, {"n", "weighted", "pass"});
            for (const auto& c : rep.report.checks)
                e.add(record(sl2_meta(N), {{"n", c.r}, {"weighted", c.value}, {"pass", c.pass}}));
            e.print(out);
            out << "max weighted value " << to_string(rep.max_weighted) << "\n";
            return result_line(rep.report.passed(), rep.report.failed());
        }
        err << app.help();
        return kUsage;
    } catch (const Uncertified& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const RadiusExceeded& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const DepthTooSmall& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const BudgetExceeded& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace heckej::cli
