// End-to-end tests of the command-line binary: exit codes, JSON payloads,
// and byte-identical reruns. Paths come in as arguments: the binary, the
// data directory, and the golden directory.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>

#include "expord/json_io.hpp"

namespace {

std::string g_cli, g_data, g_golden;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string data(const std::string& name) { return g_data + "/" + name; }

using expord::io::Json;

}  // namespace

TEST(Cli, CompareExitCodes) {
  EXPECT_EQ(run("compare col " + data("E1.json") + " " + data("E2.json")).exit_code, 0);
  EXPECT_EQ(run("compare cone " + data("E1.json") + " " + data("E2.json")).exit_code, 3);
  EXPECT_EQ(run("compare zon " + data("E2.json") + " " + data("E3.json")).exit_code, 3);
  EXPECT_EQ(run("compare zon " + data("E3.json") + " " + data("E3.json")).exit_code, 0);
  EXPECT_EQ(run("compare col " + data("E1.json") + " missing.json").exit_code, 1);
  EXPECT_EQ(run("compare nonsense a b").exit_code, 1);
}

TEST(Cli, CompareZonWitnessPayload) {
  const auto r = run("compare zon " + data("E2.json") + " " + data("E3.json"));
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["order"], "zon");
  EXPECT_EQ(j["dominates"], false);
  EXPECT_TRUE(j["witness"].contains("point"));
  EXPECT_TRUE(j["witness"].contains("beta"));
}

TEST(Cli, CompareAllGrid) {
  const auto r = run("compare all " + data("E1.json") + " " + data("E2.json"));
  EXPECT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["orders"].size(), 4u);
  EXPECT_EQ(j["orders"][0]["order"], "col");
  EXPECT_EQ(j["orders"][0]["forward"], true);
  EXPECT_EQ(j["orders"][1]["forward"], false);
  EXPECT_EQ(j["orders"][1]["strict_backward"], true);
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run("validate " + data("E2.json")).exit_code, 0);
  const std::string bad = "/tmp/expord_bad_experiment.json";
  expord::io::save_text(bad, R"({"rows":[["1","0"],["1/2","1/3"]]})");
  const auto r = run("validate " + bad);
  EXPECT_EQ(r.exit_code, 3);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["valid"], false);
  EXPECT_EQ(j["error"]["kind"], "row_sum_not_one");
  EXPECT_EQ(j["error"]["row"], 2);
  EXPECT_EQ(j["error"]["sum"], "5/6");
}

TEST(Cli, PosteriorsPayload) {
  const auto r = run("posteriors " + data("E2.json") + " " + data("uniform2.json"));
  EXPECT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["atoms"].size(), 3u);
  EXPECT_EQ(j["atoms"][0]["posterior"][0], "5/6");
  EXPECT_EQ(j["atoms"][1]["weight"], "2/5");
}

TEST(Cli, MhSolveMatchesWorkedValues) {
  const auto r = run("mh solve " + data("id2.json") + " " + data("env_ll.json"));
  EXPECT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(j["cost"], "1");
  EXPECT_EQ(j["t"][0], "2");
  EXPECT_EQ(j["lambda"], "1");

  // infeasible is a valid answer with exit 0 and cost "inf"
  const auto ri = run("mh solve " + data("flat.json") + " " + data("env_ll.json"));
  EXPECT_EQ(ri.exit_code, 0);
  EXPECT_EQ(Json::parse(ri.out)["cost"], "inf");

  // concave utility: FOC in utility space, payments through the inverse
  const auto rp = run("mh solve " + data("id2.json") + " " + data("env_plc_ll.json"));
  const Json jp = Json::parse(rp.out);
  EXPECT_EQ(jp["cost"], "1/2");
  EXPECT_EQ(jp["t"][0], "1");
  EXPECT_EQ(jp["lambda"], "1/2");
}

TEST(Cli, MhImplementable) {
  EXPECT_EQ(run("mh implementable " + data("id2.json") + " " + data("env_ll.json")).exit_code,
            0);
  const auto r = run("mh implementable " + data("flat.json") + " " + data("env_ll.json"));
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(Json::parse(r.out)["implementable"], false);
}

TEST(Cli, MhCounterexampleWritesEnvironment) {
  const std::string out = "/tmp/expord_ce_env.json";
  const auto r = run("mh counterexample --order cone " + data("E1.json") + " " +
                     data("E2.json") + " --out " + out);
  EXPECT_EQ(r.exit_code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["environment"]["gradient"][0], "1/2");
  EXPECT_EQ(j["environment"]["gradient"][1], "1/10");
  EXPECT_EQ(j["guarantee"]["cost_a"], "1");
  EXPECT_EQ(j["guarantee"]["cost_b"], "3/10");
  // the written file parses as a valid environment
  const auto env = expord::io::parse_environment(expord::io::load_json(out));
  EXPECT_EQ(env.constraints.kind, expord::mh::ConstraintClass::LL);
}

TEST(Cli, SweepReports) {
  const auto hold = run("sweep 2 " + data("E2.json") + " " + data("E1.json") +
                        " --trials 25 --seed 1");
  EXPECT_EQ(hold.exit_code, 0);
  const Json jh = Json::parse(hold.out);
  EXPECT_EQ(jh["dominates"], true);
  EXPECT_EQ(jh["violations"].size(), 0u);

  const auto fail = run("sweep 2 " + data("E1.json") + " " + data("E2.json") +
                        " --trials 5 --seed 1");
  EXPECT_EQ(fail.exit_code, 0);
  const Json jf = Json::parse(fail.out);
  EXPECT_EQ(jf["dominates"], false);
  EXPECT_EQ(jf["counterexample"]["guarantee"]["cost_b"], "3/10");

  const auto self = run("sweep 3 " + data("E3.json") + " " + data("E3.json") +
                        " --trials 25 --seed 2");
  EXPECT_EQ(Json::parse(self.out)["violations"].size(), 0u);
}

TEST(Cli, ByteIdenticalReruns) {
  for (const std::string args :
       {"compare all " + data("E2.json") + " " + data("E3.json"),
        "sweep 2 " + data("E2.json") + " " + data("E1.json") + " --trials 10 --seed 9",
        "oracle lcx " + data("E3.json") + " " + data("E2.json") + " --prior " +
            data("uniform2.json") + " --trials 50 --seed 3"}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_EQ(a.exit_code, b.exit_code);
  }
}

TEST(Cli, OracleSubcommands) {
  EXPECT_EQ(run("oracle facets " + data("E2.json") + " --point 9/10,1/2").exit_code, 0);
  EXPECT_EQ(run("oracle facets " + data("E1.json") + " --point 1/2,1/10").exit_code, 3);

  const auto br = run("oracle bestresponse " + data("id2.json") +
                      " --contract 2,0 --center 1/2,1/2 --scale 2 --k 100");
  EXPECT_EQ(br.exit_code, 0);
  EXPECT_EQ(Json::parse(br.out)["argmax"][0], "3/4");

  EXPECT_EQ(run("oracle lcx " + data("E3.json") + " " + data("E2.json") + " --prior " +
                data("uniform2.json") + " --trials 100 --seed 7")
                .exit_code,
            0);
  EXPECT_EQ(run("oracle lcx " + data("E2.json") + " " + data("E3.json") + " --prior " +
                data("uniform2.json") + " --trials 100 --seed 7 --inject-witness")
                .exit_code,
            3);

  const auto lag = run("oracle lagrangian " + data("E3.json") + " " + data("E2.json") +
                       " --beta 1,-1 --prior " + data("uniform2.json"));
  EXPECT_EQ(lag.exit_code, 0);
  const Json jl = Json::parse(lag.out);
  EXPECT_EQ(jl["left"]["finite"], false);
  EXPECT_EQ(jl["left"]["value"], "inf");
}

TEST(Cli, PlotGoldenFiles) {
  // Figure 1 reproduction: Panel A (conic spans of E1, E2) and Panel B
  // (zonotopes of E2, E3) must match the checked-in SVGs byte for byte.
  for (const auto& [args, golden] :
       {std::pair{std::string("plot cone ") + data("E1.json") + " " + data("E2.json") +
                      " --out /tmp/expord_panelA.svg",
                  std::string("panelA.svg")},
        std::pair{std::string("plot zon ") + data("E2.json") + " " + data("E3.json") +
                      " --out /tmp/expord_panelB.svg",
                  std::string("panelB.svg")}}) {
    const auto r = run(args);
    EXPECT_EQ(r.exit_code, 0) << args;
    const std::string rendered =
        expord::io::read_text(golden == "panelA.svg" ? "/tmp/expord_panelA.svg"
                                                     : "/tmp/expord_panelB.svg");
    const std::string expected = expord::io::read_text(g_golden + "/" + golden);
    EXPECT_EQ(rendered, expected) << golden;
  }
}

TEST(Cli, PlotPosteriorsRuns) {
  const auto r = run("plot posteriors " + data("E2.json") + " --prior " +
                     data("uniform2.json") + " --out /tmp/expord_post.svg");
  EXPECT_EQ(r.exit_code, 0);
}

TEST(Cli, SeedEnvironmentVariable) {
  // EXPORD_SEED provides the default seed; --seed still wins.
  g_cli = "EXPORD_SEED=42 " + g_cli;
  const auto r = run("sweep 3 " + data("E3.json") + " " + data("E3.json") + " --trials 2");
  const auto w = run("sweep 3 " + data("E3.json") + " " + data("E3.json") +
                     " --trials 2 --seed 7");
  g_cli = g_cli.substr(std::string("EXPORD_SEED=42 ").size());
  EXPECT_EQ(Json::parse(r.out)["seed"], 42);
  EXPECT_EQ(Json::parse(w.out)["seed"], 7);
}

TEST(Cli, RunReportFile) {
  const std::string path = "/tmp/expord_report.json";
  const auto r = run("--report " + path + " compare zon " + data("E2.json") + " " +
                     data("E3.json"));
  EXPECT_EQ(r.exit_code, 3);
  const Json rep = Json::parse(expord::io::read_text(path));
  EXPECT_TRUE(rep.contains("command"));
  EXPECT_TRUE(rep.contains("elapsed_ms"));
  EXPECT_EQ(rep["exit_code"], 3);
  EXPECT_EQ(rep["inputs"].size(), 2u);
  EXPECT_EQ(rep["output"]["order"], "zon");
  // stable field order for diffs
  const auto& items = rep.items();
  std::vector<std::string> keys;
  for (const auto& [k, v] : items) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "inputs", "seed", "elapsed_ms",
                                            "exit_code", "output"}));
}

int main_impl(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: %s <cli> <data dir> <golden dir>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_golden = argv[3];
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}

int main(int argc, char** argv) { return main_impl(argc, argv); }
