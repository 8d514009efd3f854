#include <filesystem>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "cli.hpp"

using namespace heckej;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "heckej");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> json_lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] == '{') out.push_back(json::parse(line));
    return out;
}

std::string last_line(const std::string& text) {
    auto end = text.find_last_not_of('\n');
    auto start = text.rfind('\n', end);
    return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

}  // namespace

TEST_CASE("documented invocations", "[cli]") {
    auto kl = run({"kl", "--type", "A1~", "--radius", "8", "--y", "", "--w", "010", "--format", "json"});
    CHECK(kl.code == 0);
    auto rec = json_lines(kl.out);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0]["P"] == "1");

    auto verify = run({"sl2", "verify", "--R", "50"});
    CHECK(verify.code == 0);
    CHECK(last_line(verify.out) == "RESULT pass=123 fail=0");

    auto afn = run({"afn", "--type", "A1~", "--z", "0", "--scan", "2"});
    CHECK(afn.code == 3);
    CHECK(afn.out.empty());
    auto forced = run({"afn", "--type", "A1~", "--z", "0", "--scan", "2", "--allow-uncertified", "--format", "json"});
    CHECK(forced.code == 0);
    auto a = json_lines(forced.out);
    REQUIRE(a.size() == 1);
    CHECK(a[0]["certified"] == false);
    CHECK(a[0]["a"] == 1);
}

TEST_CASE("usage and refusal exit codes", "[cli]") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"kl", "--y", "0"}).code == 2);
    CHECK(run({"kl", "--type", "B2~", "--y", "0", "--w", "0"}).code == 2);
    CHECK(run({"kl", "--y", "0", "--w", "0x"}).code == 2);
    CHECK(run({"group", "--radius", "2", "--format", "xml"}).code == 2);
    CHECK(run({"gamma", "--x", "0", "--y", "0", "--z", "0", "--scan", "3"}).code == 3);
    CHECK(run({"sl2", "count", "--p", "2", "--m", "2", "--n", "2", "--r", "1"}).code == 3);
    CHECK(run({"sl2", "count", "--p", "3", "--m", "3", "--n", "0", "--r", "0", "--budget", "10"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verification commands report RESULT last", "[cli]") {
    auto count = run({"sl2", "count", "--p", "2", "--m", "4", "--n", "1", "--r", "0", "--lattice", "std", "--format", "json"});
    CHECK(count.code == 0);
    CHECK(last_line(count.out) == "RESULT pass=1 fail=0");
    CHECK(json_lines(count.out).at(0)["fraction"] == "1/3");

    auto decay = run({"sl2", "decay", "--q", "2", "--N", "10"});
    CHECK(decay.code == 0);
    CHECK(last_line(decay.out) == "RESULT pass=21 fail=0");

    auto phi = run({"phi-check", "--type", "A1~", "--max-total", "4", "--rank-length", "2", "--q", "2,4"});
    CHECK(phi.code == 0);
    CHECK(last_line(phi.out).rfind("RESULT pass=", 0) == 0);
    CHECK(last_line(phi.out).find("fail=0") != std::string::npos);
}

TEST_CASE("J-level commands", "[cli]") {
    auto g = run({"gamma", "--x", "0", "--y", "0", "--z", "0", "--format", "json"});
    REQUIRE(g.code == 0);
    CHECK(json_lines(g.out).at(0)["gamma"] == "-1");
    auto gu = run({"gamma", "--x", "0", "--y", "0", "--z", "0", "--basis", "unsigned", "--format", "json"});
    CHECK(json_lines(gu.out).at(0)["gamma"] == "1");

    auto j = run({"jmul", "--x", "01", "--y", "10", "--basis", "unsigned", "--format", "csv"});
    REQUIRE(j.code == 0);
    CHECK(j.out == "z,coeff\n0,1\n010,1\n");

    auto lin = run({"jmul", "--x", "0 + 2*1", "--y", "0", "--basis", "unsigned", "--format", "csv"});
    CHECK(lin.out == "z,coeff\n0,1\n");

    auto d = run({"dinv", "--type", "A2~", "--radius", "5", "--format", "json"});
    REQUIRE(d.code == 0);
    CHECK(json_lines(d.out).size() == 10);

    auto phi = run({"phi", "--x", "0", "--basis", "unsigned", "--q", "4", "--format", "json"});
    REQUIRE(phi.code == 0);
    auto rec = json_lines(phi.out);
    REQUIRE(rec.size() == 2);
    CHECK(rec[0]["z"] == "0");
    CHECK(rec[0]["a1"] == "5/4");
    CHECK(rec[1]["z"] == "01");
}

TEST_CASE("JSON records carry metadata and round-trip", "[cli]") {
    std::vector<std::vector<std::string>> commands = {
        {"group", "--type", "A2~", "--extended", "--radius", "2"},
        {"kl", "--type", "A2~", "--y", "0", "--w", "01210"},
        {"hmul", "--type", "A1~", "--extended", "--x", "0@1", "--y", "01", "--in", "T"},
        {"hconst", "--type", "A2~", "--x", "01", "--y", "10"},
        {"afn", "--type", "A2~", "--z", "010"},
        {"phi", "--type", "A1~", "--x", "01@1", "--extended"},
        {"sl2", "conv", "--r", "-2", "--lattice", "sub", "--n", "-1"},
    };
    for (auto cmd : commands) {
        cmd.insert(cmd.end(), {"--format", "json"});
        auto r = run(cmd);
        INFO(cmd[0]);
        REQUIRE(r.code == 0);
        auto records = json_lines(r.out);
        REQUIRE(!records.empty());
        bool extended = std::find(cmd.begin(), cmd.end(), "--extended") != cmd.end();
        auto type = std::find(cmd.begin(), cmd.end(), "--type");
        auto grp = make_group(GroupDescriptor::parse(type == cmd.end() ? "A1~" : *(type + 1), extended));
        for (const auto& rec : records) {
            REQUIRE(rec.contains("certified"));
            REQUIRE(rec.contains("radius"));
            REQUIRE(rec.contains("basis"));
            REQUIRE(json::parse(rec.dump()) == rec);
            for (const auto& [key, val] : rec.items()) {
                if (key.size() > 4 && key.substr(key.size() - 4) == "_elt") {
                    std::string text_key = key.substr(0, key.size() - 4);
                    auto from_json = element_from_json(val, *grp);
                    auto text = rec[text_key];
                    REQUIRE(format_element(from_json) == text.get<std::string>());
                }
                if (key == "P_v") {
                    LaurentInt P = laurent_from_json(val);
                    for (const auto& [e, c] : P.terms()) REQUIRE((e >= 0 && e % 2 == 0));
                } else if (key.size() > 2 && key.substr(key.size() - 2) == "_v") {
                    REQUIRE(laurent_from_json(val).to_string() == rec[key.substr(0, key.size() - 2)]);
                }
            }
        }
    }
}

TEST_CASE("table and csv output", "[cli]") {
    auto t = run({"group", "--radius", "1"});
    CHECK(t.out == "element  length  left_descents  right_descents\n"
                   "e        0       -              -\n"
                   "0        1       0              0\n"
                   "1        1       1              1\n");
    auto c = run({"sl2", "conv", "--r", "-1", "--format", "csv"});
    CHECK(c.out == "r,lattice,value\n-1,std,q + 1\n");
}

TEST_CASE("KL cache is transparent", "[cli]") {
    auto dir = std::filesystem::temp_directory_path() / "heckej_cli_cache_test";
    std::filesystem::remove_all(dir);
    std::vector<std::string> cmd = {"phi", "--type", "A2~", "--x", "01", "--radius", "5", "--format", "json"};
    auto plain = run(cmd);
    auto with_cache = cmd;
    with_cache.insert(with_cache.end(), {"--cache-dir", dir.string()});
    auto cold = run(with_cache);
    REQUIRE(std::filesystem::exists(dir));
    REQUIRE(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    auto warm = run(with_cache);
    CHECK(cold.code == 0);
    CHECK(cold.out == plain.out);
    CHECK(warm.out == cold.out);

    // a corrupt cache file is reported, not silently recomputed
    for (const auto& f : std::filesystem::directory_iterator(dir)) std::ofstream(f.path()) << "{";
    CHECK(run(with_cache).code == 2);
    std::filesystem::remove_all(dir);
}
