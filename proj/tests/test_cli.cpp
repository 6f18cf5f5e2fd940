#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::string kSamples = FRAISSE_SAMPLES_DIR;

std::string sample(const std::string& name) { return kSamples + "/" + name; }

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = fraisse::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "fraisse_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> arrow_args(const std::string& c) {
    return {"arrow", "--age", "linear_order", "--a", sample("chain2.st"), "--b", sample("chain3.st"), "--c", sample(c),
            "--colors", "2", "--no-cache"};
}

std::vector<std::string> with(std::vector<std::string> args, std::initializer_list<std::string> more) {
    args.insert(args.end(), more);
    return args;
}

} // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run(arrow_args("chain6.st")).code, 0);
    EXPECT_EQ(run(arrow_args("chain5.st")).code, 1);
    EXPECT_EQ(run({"arrow", "--a", sample("chain2.st"), "--b", sample("chain3.st"), "--c", sample("chain5.st")}).code, 2);
    EXPECT_EQ(run({"arrow", "--age", "nope", "--a", sample("chain2.st"), "--b", sample("chain3.st"), "--c",
                   sample("chain5.st")}).code,
              2);
    EXPECT_EQ(run({"parse", sample("missing.st")}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run(with(arrow_args("chain6.st"), {"--max-nodes", "5"})).code, 3);
}

TEST(Cli, InputErrorsNameTheFile) {
    const auto bad = scratch("bad.st");
    std::ofstream(bad) << "signature: lt/2\nsize: 2\nlt: (0,7)\n";
    const auto r = run({"parse", bad.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Cli, CertificatesRoundTrip) {
    for (const char* c : {"chain5.st", "chain6.st"}) {
        const auto cert = scratch(std::string(c) + ".json");
        run(with(arrow_args(c), {"--certificate", cert.string()}));
        const auto v = run({"verify", cert.string()});
        EXPECT_EQ(v.code, 0) << v.out << v.err;
        EXPECT_NE(v.out.find("valid"), std::string::npos);
    }
}

TEST(Cli, FlippedColorIsInvalid) {
    const auto cert = scratch("flip.json");
    run(with(arrow_args("chain5.st"), {"--certificate", cert.string()}));
    std::ifstream in(cert);
    auto doc = json::parse(in);
    auto& colors = doc["result"]["coloring"];
    bool any_invalid = false;
    for (std::size_t i = 0; i < colors.size(); ++i) {
        auto copy = doc;
        copy["result"]["coloring"][i] = 1 - colors[i].get<int>();
        const auto tampered = scratch("flip_" + std::to_string(i) + ".json");
        std::ofstream(tampered) << copy.dump(2);
        const auto v = run({"verify", tampered.string()});
        EXPECT_NE(v.code, 2);
        any_invalid = any_invalid || v.code == 1;
    }
    EXPECT_TRUE(any_invalid);
    // The 5-chain's counterexample is tight: flipping the first color must break it.
    auto copy = doc;
    copy["result"]["coloring"][0] = 1 - colors[0].get<int>();
    const auto tampered = scratch("flip_first.json");
    std::ofstream(tampered) << copy.dump(2);
    EXPECT_EQ(run({"verify", tampered.string()}).code, 1);
}

TEST(Cli, WrongInputIsADigestMismatch) {
    const auto cert = scratch("digest.json");
    run(with(arrow_args("chain6.st"), {"--certificate", cert.string()}));
    const auto v = run({"verify", cert.string(), "--c", sample("chain5.st")});
    EXPECT_EQ(v.code, 2);
    EXPECT_NE(v.err.find("digest mismatch"), std::string::npos);
    EXPECT_EQ(run({"verify", cert.string(), "--c", sample("chain6.st")}).code, 0);
    // Tampering with an embedded input text is caught by its recorded digest.
    std::ifstream in(cert);
    auto doc = json::parse(in);
    doc["inputs"][2]["text"] = "signature: lt/2\nsize: 5\nlt: (0,1)\n";
    const auto tampered = scratch("digest_tampered.json");
    std::ofstream(tampered) << doc.dump(2);
    EXPECT_EQ(run({"verify", tampered.string()}).code, 2);
}

TEST(Cli, VerifyFlagOnTheCommand) {
    const auto cert = scratch("flag.json");
    run(with(arrow_args("chain6.st"), {"--certificate", cert.string()}));
    EXPECT_EQ(run(with(arrow_args("chain6.st"), {"--verify", cert.string()})).code, 0);
    EXPECT_EQ(run(with(arrow_args("chain5.st"), {"--verify", cert.string()})).code, 2);
}

TEST(Cli, JsonReportIsDeterministic) {
    const auto first = run(with(arrow_args("chain5.st"), {"--json"}));
    for (const char* threads : {"1", "4"})
        for (int i = 0; i < 3; ++i)
            EXPECT_EQ(run(with(arrow_args("chain5.st"), {"--json", "--threads", threads})).out, first.out);
    const auto doc = json::parse(first.out);
    EXPECT_EQ(doc["verdict"], "fails");
    EXPECT_EQ(doc["command"], "arrow");
    EXPECT_FALSE(doc["parameters"].contains("threads"));
}

TEST(Cli, EveryCommandCertifiesAndVerifies) {
    const std::vector<std::vector<std::string>> commands{
        {"parse", sample("k3.st")},
        {"enumerate", "--age", "graph", "--max-n", "4"},
        {"embeddings", "--a", sample("k2.st"), "--b", sample("k3.st")},
        {"patterns", "--age", "linear_order", "--a", sample("pt.st"), "--z", sample("pt.st")},
        {"pattern-count", "--age", "set", "--a", sample("set2.st"), "--z", sample("set2.st")},
        {"arrow-search", "--age", "linear_order", "--a", sample("chain2.st"), "--b", sample("chain3.st"), "--colors",
         "2", "--max-n", "6"},
        {"arrow-search", "--age", "linear_order", "--a", sample("chain2.st"), "--b", sample("chain3.st"), "--colors",
         "2", "--max-n", "5"},
        {"definable-arrow", "--age", "graph", "--a", sample("k1.st"), "--b", sample("k2.st"), "--c", sample("k4.st"),
         "--z", sample("k1.st")},
        {"definable-arrow", "--age", "graph", "--a", sample("k1.st"), "--b", sample("k2.st"), "--c", sample("k2.st"),
         "--z", sample("k1.st")},
        {"stable-arrow", "--age", "linear_order", "--a", sample("pt.st"), "--b", sample("chain2.st"), "--c",
         sample("chain3.st"), "--z", sample("pt.st"), "--depth", "4"},
        {"stable-arrow", "--age", "set", "--a", sample("set1.st"), "--b", sample("set2.st"), "--c", sample("set3.st"),
         "--z", sample("set1.st"), "--depth", "4"},
        {"roelcke-witness", "--age", "linear_order", "--a", sample("pt.st"), "--b", sample("chain2.st"), "--z",
         sample("pt.st"), "--max-n", "3"},
        {"roelcke-witness", "--age", "linear_order", "--a", sample("pt.st"), "--b", sample("chain2.st"), "--z",
         sample("pt.st"), "--max-n", "2"},
        {"stability", "--age", "graph", "--a", sample("k1.st"), "--z", sample("k1.st"), "--depth", "4"},
        {"stability", "--age", "set", "--a", sample("set1.st"), "--z", sample("set1.st"), "--depth", "4"},
        {"proximal-check", "--age", "linear_order", "--u", sample("chain4.st"), "--a", sample("pt.st"), "--coloring",
         sample("chain4_least.col"), "--max-n", "3"},
        {"proximal-arrow", "--age", "linear_order", "--u", sample("chain4.st"), "--a", sample("pt.st"), "--b",
         sample("chain2.st"), "--coloring", sample("chain4_least.col"), "--max-n", "3"},
        {"convex-arrow", "--a", sample("set1.st"), "--b", sample("set2.st"), "--c", sample("set4.st"), "--epsilon",
         "0.5"},
        {"convex-arrow", "--a", sample("pt.st"), "--b", sample("chain2.st"), "--c", sample("chain2.st"), "--epsilon",
         "0.5"},
        {"orbits", "--c", sample("k4.st"), "--a", sample("k2.st")},
        {"invariant-partitions", "--c", sample("chain3.st"), "--a", sample("pt.st"), "--max-blocks", "3"},
        {"coherent-partitions", "--age", "linear_order", "--chain",
         sample("chain2.st") + "," + sample("chain3.st"), "--a", sample("pt.st"), "--max-blocks", "2"},
        {"amalgamation", "--age", "graph", "--property", "amalgamation", "--bound", "2"},
        {"amalgamation", "--age", "tournament", "--property", "free", "--bound", "2"},
    };
    int index = 0;
    for (const auto& args : commands) {
        const auto cert = scratch("cmd_" + std::to_string(index++) + ".json");
        auto full = args;
        full.insert(full.end(), {"--no-cache", "--certificate", cert.string()});
        const auto r = run(full);
        ASSERT_TRUE(r.code == 0 || r.code == 1) << args[0] << ": " << r.err;
        const auto v = run({"verify", cert.string()});
        EXPECT_EQ(v.code, 0) << args[0] << "\n" << v.out << v.err;
    }
}

TEST(Cli, CacheHitsReturnTheSameReport) {
    const auto dir = scratch("cache");
    fs::remove_all(dir);
    ::setenv("FRAISSE_CACHE_DIR", dir.string().c_str(), 1);
    std::vector<std::string> args{"arrow", "--age", "linear_order", "--a", sample("chain2.st"), "--b",
                                  sample("chain3.st"), "--c", sample("chain5.st"), "--json"};
    const auto cold = run(args);
    EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator()), 1);
    const auto warm = run(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4"});
    const auto warm4 = run(threaded);
    ::unsetenv("FRAISSE_CACHE_DIR");
    EXPECT_EQ(cold.code, warm.code);
    EXPECT_EQ(cold.out, warm.out);
    EXPECT_EQ(cold.out, warm4.out);
    EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator()), 1);
}
