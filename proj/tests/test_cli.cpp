#include "symcap/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace symcap;

namespace {

struct Run {
    int code;
    std::string out, err;
};

std::string sample(const std::string& name) { return std::string(SYMCAP_SAMPLES_DIR) + "/" + name; }

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "symcap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

/// Runs the built binary through the shell; stderr goes to a scratch file.
Run run_binary(const std::string& args, const std::string& env = "")
{
    const std::string err_path = ::testing::TempDir() + "symcap_cli_stderr.txt";
    const std::string cmd = env + " '" + std::string(SYMCAP_CLI_PATH) + "' " + args + " 2>'" + err_path + "'";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, "", ""};
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    std::ifstream e(err_path);
    std::stringstream es;
    es << e.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, es.str()};
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);   // header
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::vector<std::string> column(const std::string& text, std::size_t c)
{
    std::vector<std::string> out;
    for (const auto& r : csv_rows(text)) out.push_back(r.at(c));
    return out;
}

std::string summary(const std::string& text)
{
    const auto pos = text.rfind("# ");
    return pos == std::string::npos ? "" : text.substr(pos);
}

double summary_value(const std::string& s, const std::string& key)
{
    const auto pos = s.find(" " + key + " ");
    return std::stod(s.substr(pos + key.size() + 2));
}

}  // namespace

TEST(CliCapacities, BallExample)
{
    const auto r = run({"capacities", "--domain", sample("ball.json"), "--kmax", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(column(r.out, 1), (std::vector<std::string>{"0", "1", "1", "2", "2", "2", "3"}));
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "k,c_k,c_k_float,method,lower_bound_only");
}

TEST(CliCapacities, PolydiskExample)
{
    // min over (m + 1)(n + 1) >= k + 1 of m + n
    const auto r = run({"capacities", "--domain", sample("polydisk_1_1.json"), "--kmax", "5"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(column(r.out, 1), (std::vector<std::string>{"0", "1", "2", "2", "3", "3"}));
    const auto p = run({"capacities", "--domain", sample("polydisk_1_1.json"), "--kmax", "5", "--method", "path"});
    EXPECT_EQ(column(p.out, 1), column(r.out, 1));
}

TEST(CliCapacities, JsonOutput)
{
    const auto r = run({"capacities", "--domain", sample("union.json"), "--kmax", "8", "--out", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 9u);
    const auto csv = run({"capacities", "--domain", sample("union.json"), "--kmax", "8"});
    const auto values = column(csv.out, 1);
    for (std::size_t k = 0; k < j.size(); ++k) {
        EXPECT_EQ(j[k]["k"].get<std::int64_t>(), static_cast<std::int64_t>(k));
        EXPECT_EQ(j[k]["c_k"].get<std::string>(), values[k]);
    }
}

TEST(CliCapacities, MethodsAgreeOnConvexDomain)
{
    const auto path = run({"capacities", "--domain", sample("convex_octagon.json"), "--kmax", "12", "--method", "path"});
    const auto comp =
        run({"capacities", "--domain", sample("convex_octagon.json"), "--kmax", "12", "--method", "complement", "--threads", "3"});
    ASSERT_EQ(path.code, 0);
    ASSERT_EQ(comp.code, 0) << comp.err;
    EXPECT_EQ(column(path.out, 1), column(comp.out, 1));
}

TEST(CliExitCodes, MalformedAndInvalidSpecs)
{
    EXPECT_EQ(run_binary("capacities --domain '" + write_temp("bad.json", "{bad") + "' --kmax 3").code, 2);
    EXPECT_EQ(run({"capacities", "--domain", "/nonexistent/x.json", "--kmax", "3"}).code, 2);
    EXPECT_EQ(run({"capacities", "--domain", write_temp("unk.json", R"({"type":"torus"})"), "--kmax", "3"}).code, 2);
    EXPECT_EQ(run({"capacities", "--domain", write_temp("neg.json", R"({"type":"ball","a":"-1"})"), "--kmax", "3"}).code, 2);
    EXPECT_EQ(run({"capacities", "--domain", write_temp("frac.json", R"({"type":"ball","a":"1/0"})"), "--kmax", "3"}).code, 2);
    const auto bent = write_temp("bent.json", R"({"type":"toric","kind":"concave","vertices":[["0","1"],["1","1/2"],["2","1/2"],["3","0"]]})");
    EXPECT_EQ(run({"capacities", "--domain", bent, "--kmax", "3"}).code, 2);
}

TEST(CliExitCodes, Mismatches)
{
    EXPECT_EQ(run_binary("capacities --domain '" + sample("polydisk_1_1.json") + "' --kmax 3 --method weights").code, 3);
    EXPECT_EQ(run({"capacities", "--domain", sample("convex_octagon.json"), "--kmax", "3", "--method", "closed"}).code, 3);
    EXPECT_EQ(run({"capacities", "--domain", sample("unit_box.json"), "--kmax", "3"}).code, 3);
    EXPECT_EQ(run({"cube-bound", "--domain", sample("union.json"), "--k", "4"}).code, 3);
    EXPECT_EQ(run({"weights", "--domain", sample("convex_octagon.json")}).code, 3);
    const auto g = write_temp("int_theta.json", R"({"orbits":[{"m":1,"A":"1","theta":"2","sl":0}]})");
    EXPECT_EQ(run({"ech-index", "--generator", g}).code, 3);
    EXPECT_EQ(run({"ech-index", "--generator", g, "--boundary"}).code, 0);
}

TEST(CliExitCodes, UsageErrors)
{
    EXPECT_EQ(run_binary("").code, 1);
    EXPECT_EQ(run_binary("capacities --kmax 3").code, 1);
    EXPECT_EQ(run_binary("capacities --domain x --kmax -2").code, 1);
    EXPECT_EQ(run_binary("--help").code, 0);
    EXPECT_EQ(run_binary("capacities --domain '" + sample("ball.json") + "' --kmax 3", "SYMCAP_THREADS=zero").code, 1);
}

TEST(CliErrorTerm, EmptyWindow)
{
    const auto r = run_binary("error-term --domain '" + sample("ball.json") + "' --kmax 0");
    EXPECT_EQ(r.code, 4);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("empty"), std::string::npos);
}

TEST(CliErrorTerm, EllipsoidReportsTarget)
{
    const auto r = run({"error-term", "--domain", sample("ellipsoid_2_1.json"), "--kmax", "1000"});
    ASSERT_EQ(r.code, 0);
    const auto s = summary(r.out);
    EXPECT_NE(s.find("target -1.5 "), std::string::npos) << s;
    EXPECT_NE(s.find("window 500..1000"), std::string::npos) << s;
}

TEST(CliErrorTerm, BallOscillationAtMillion)
{
    const auto r = run({"error-term", "--domain", sample("ball.json"), "--kmax", "1000000", "--window", "0.5"});
    ASSERT_EQ(r.code, 0);
    const auto s = summary(r.out);
    EXPECT_NEAR(summary_value(s, "min"), -1.5, 0.01) << s;
    EXPECT_NEAR(summary_value(s, "max"), -0.5, 0.01) << s;
}

TEST(CliErrorTerm, CsvRoundTrip)
{
    for (const char* name : {"ellipsoid_2_1.json", "union.json", "concave_kink.json"}) {
        const auto caps = run({"capacities", "--domain", sample(name), "--kmax", "300"});
        const auto et = run({"error-term", "--domain", sample(name), "--kmax", "300"});
        ASSERT_EQ(caps.code, 0);
        ASSERT_EQ(et.code, 0);
        const Rational vol = volume(*load_domain_spec(sample(name)).domain);
        const auto crow = csv_rows(caps.out);
        const auto erow = csv_rows(et.out);
        ASSERT_EQ(crow.size(), erow.size());
        for (std::size_t i = 0; i < crow.size(); ++i) {
            const std::int64_t k = std::stoll(crow[i][0]);
            const double recomputed = error_term(parse_rational(crow[i][1]), k, vol);
            const double printed = std::strtod(erow[i][2].c_str(), nullptr);
            EXPECT_EQ(crow[i][1], erow[i][1]);
            EXPECT_EQ(recomputed, printed) << name << " k=" << k;
        }
    }
}

TEST(CliRuelle, Examples)
{
    const auto ball = run({"ruelle", "--domain", sample("ball.json")});
    ASSERT_EQ(ball.code, 0);
    EXPECT_NE(ball.out.find("closed_form,2\n"), std::string::npos);

    const auto power = run({"ruelle", "--domain", sample("power_concave_p2.json")});
    ASSERT_EQ(power.code, 0);
    EXPECT_NE(power.out.find("closed_form,2\n"), std::string::npos);
    const auto q = power.out.find("quadrature,");
    ASSERT_NE(q, std::string::npos);
    EXPECT_NEAR(std::stod(power.out.substr(q + 11)), 2, 1e-8);

    const auto octagon = run({"ruelle", "--domain", sample("convex_octagon.json")});
    EXPECT_NE(octagon.out.find("closed_form,4\n"), std::string::npos);
    EXPECT_EQ(run({"ruelle", "--domain", sample("union.json")}).code, 3);
}

TEST(CliObstruct, Examples)
{
    const auto r = run({"obstruct", "--source", sample("ball.json"), "--target", sample("triangle_2_half.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verdict,obstructed\n"), std::string::npos);
    EXPECT_NE(r.out.find("source_sum,2\n"), std::string::npos);
    EXPECT_NE(r.out.find("target_sum,5/2\n"), std::string::npos);

    const auto same = run({"obstruct", "--source", sample("ball.json"), "--target", sample("ball.json")});
    EXPECT_NE(same.out.find("verdict,not-obstructed\n"), std::string::npos);

    const auto vol = run({"obstruct", "--source", sample("ball.json"), "--target", sample("ellipsoid_2_1.json")});
    EXPECT_NE(vol.out.find("verdict,volume-mismatch\n"), std::string::npos);
    EXPECT_EQ(run({"obstruct", "--source", sample("ball.json"), "--target", sample("ball.json"), "--area-tol", "x"}).code, 2);
}

TEST(CliCubeBound, Examples)
{
    const auto r = run({"cube-bound", "--domain", sample("unit_box.json"), "--depth", "3", "--k", "16,256,4096"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) {
        EXPECT_DOUBLE_EQ(std::stod(row[2]), -8 * std::sqrt(2.0));
        EXPECT_EQ(row[4], "false");
    }
    const auto cut = run({"cube-bound", "--domain", sample("unit_box.json"), "--depth", "1", "--k", "4096"});
    EXPECT_EQ(csv_rows(cut.out)[0][4], "true");
    EXPECT_NE(cut.err.find("warning"), std::string::npos);

    const auto ball = run({"cube-bound", "--domain", sample("ball.json"), "--depth", "2", "--k", "16"});
    ASSERT_EQ(ball.code, 0);
    EXPECT_LE(std::stod(csv_rows(ball.out)[0][2]), error_term(ck_ball(1, 16), 16, Rational(1, 2)));
}

TEST(CliEchIndex, Examples)
{
    const auto r = run({"ech-index", "--generator", sample("generator_single.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(csv_rows(r.out)[0], (std::vector<std::string>{"2", "7/5", "3/5", "1", "true"}));

    const auto pair = run({"ech-index", "--generator", sample("generator_pair.json")});
    ASSERT_EQ(pair.code, 0);
    EXPECT_EQ(csv_rows(pair.out)[0].back(), "true");

    const auto near = write_temp("near.json", R"({"orbits":[{"m":2,"A":1,"theta":0.5000000000001,"sl":0}]})");
    const auto w = run({"ech-index", "--generator", near});
    EXPECT_EQ(w.code, 0);
    EXPECT_NE(w.err.find("warning"), std::string::npos);
    EXPECT_EQ(w.out.find("warning"), std::string::npos);

    EXPECT_EQ(run({"ech-index", "--generator", write_temp("hyp.json", R"({"orbits":[{"m":2,"A":"1","theta":"1/3","sl":0,"hyperbolic":true}]})")}).code, 2);
}

TEST(CliWeights, Examples)
{
    const auto e = run({"weights", "--domain", sample("ellipsoid_2_1.json")});
    ASSERT_EQ(e.code, 0);
    EXPECT_EQ(column(e.out, 1), (std::vector<std::string>{"1", "1"}));
    EXPECT_NE(e.out.find("# check equal\n"), std::string::npos);

    const auto b = run({"weights", "--domain", sample("ball.json")});
    EXPECT_EQ(column(b.out, 1), (std::vector<std::string>{"1"}));

    const auto t = run({"weights", "--domain", sample("ellipsoid_2_1.json"), "--max-terms", "1"});
    EXPECT_NE(t.out.find("# remainder_area 1/2\n"), std::string::npos);
    EXPECT_NE(t.out.find("# check skipped (truncated)\n"), std::string::npos);
    EXPECT_EQ(run({"weights", "--domain", sample("ball.json"), "--min-weight", "1/x"}).code, 2);
}

TEST(CliStreams, DiagnosticsStayOffStdout)
{
    const auto r = run_binary("capacities --domain '" + sample("power_concave_p2.json") + "' --kmax 20");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("note:"), std::string::npos);
    EXPECT_EQ(r.out.find("note"), std::string::npos);
    EXPECT_EQ(csv_rows(r.out).size(), 21u);
}

TEST(CliThreads, EnvironmentFallbackGivesSameOutput)
{
    const std::string args = "capacities --domain '" + sample("convex_octagon.json") + "' --kmax 10 --method complement";
    const auto one = run_binary(args, "SYMCAP_THREADS=1");
    const auto four = run_binary(args, "SYMCAP_THREADS=4");
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, four.out);
}

TEST(CliInput, StdinSpec)
{
    const auto r = run_binary("capacities --domain - --kmax 3 < '" + sample("ball.json") + "'");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(column(r.out, 1), (std::vector<std::string>{"0", "1", "1", "2"}));
}
