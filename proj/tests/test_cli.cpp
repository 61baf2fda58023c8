#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "roby/io/embeddings.hpp"
#include "roby/io/report.hpp"
#include "roby/metrics.hpp"
#include "roby/synth.hpp"
#include "test_data.hpp"

namespace roby {
namespace {

using testing::fixture;
using testing::TempDir;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run(const TempDir& dir, const std::string& args, const std::string& env = "") {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = env + " '" + std::string(ROBY_CLI_PATH) + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

class Cli : public ::testing::Test {
 protected:
  TempDir dir{"cli"};
  std::string synth_file(const std::string& name, std::size_t k = 3) {
    const auto path = dir / name;
    io::write_embeddings(generate_blobs(SynthSpec{k, 40, 6, 2.0, 1.0, 31}), path, io::guess_format(path));
    return path.string();
  }
};

TEST_F(Cli, ComputeMatchesLibrary) {
  const auto in = synth_file("d.bin");
  const auto res = run(dir, "compute " + in + " --distance p=2 -o " + (dir / "r.json").string());
  ASSERT_EQ(res.exit_code, 0) << res.err;
  const auto lib = evaluate(io::load_embeddings(in), DistanceSpec::finite(2.0));
  const auto cli = io::report_from_json(slurp(dir / "r.json"));
  EXPECT_EQ(cli, lib);
  EXPECT_EQ(res.out, "FSA=" + io::format_real(lib.fsa) + " FSD=" + io::format_real(lib.fsd) +
                         " ROBY=" + io::format_real(lib.roby) + "\n");
}

TEST_F(Cli, ComputeIsDeterministicAcrossRunsAndThreads) {
  const auto in = synth_file("d.csv", 9);
  ASSERT_EQ(run(dir, "compute " + in + " --distance inf -o " + (dir / "a.json").string()).exit_code, 0);
  ASSERT_EQ(run(dir, "compute " + in + " --distance inf -o " + (dir / "b.json").string()).exit_code, 0);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));

  ASSERT_EQ(run(dir, "compute " + in + " --distance p=2 --format csv -o " + (dir / "t1.csv").string(),
                "ROBY_THREADS=1")
                .exit_code,
            0);
  ASSERT_EQ(run(dir, "compute " + in + " --distance p=2 --format csv -o " + (dir / "t8.csv").string(),
                "ROBY_THREADS=8")
                .exit_code,
            0);
  EXPECT_EQ(slurp(dir / "t1.csv"), slurp(dir / "t8.csv"));
  EXPECT_FALSE(slurp(dir / "t1.csv").empty());
}

TEST_F(Cli, ComputeRejectsBadOrder) {
  const auto res = run(dir, "compute " + synth_file("d.bin") + " --distance p=0.5");
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.err.find("p >= 1"), std::string::npos) << res.err;
}

TEST_F(Cli, ComputeInputErrorsExitTwo) {
  std::ofstream(dir / "bad.csv") << "index,label,e_0\n0,0,1\n1,1,NaN\n";
  const auto res = run(dir, "compute " + (dir / "bad.csv").string());
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.err.find("bad.csv:3"), std::string::npos) << res.err;
  EXPECT_EQ(run(dir, "compute " + (dir / "missing.bin").string()).exit_code, 2);
  EXPECT_EQ(run(dir, "compute " + synth_file("d.bin") + " --bogus-flag").exit_code, 2);
  EXPECT_EQ(run(dir, "").exit_code, 2);
}

TEST_F(Cli, ComputeWarnsForTwoClasses) {
  const auto res = run(dir, "compute " + synth_file("two.bin", 2));
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.err.find("K<3"), std::string::npos);
}

TEST_F(Cli, ComputeDropMisclassified) {
  std::ofstream(dir / "t.csv") << "index,label,truth,e_0\n0,0,0,1\n1,0,1,9\n2,1,1,3\n3,2,2,5\n4,2,2,6\n";
  const auto kept = run(dir, "compute " + (dir / "t.csv").string() + " --drop-misclassified -o " +
                                 (dir / "k.json").string());
  ASSERT_EQ(kept.exit_code, 0) << kept.err;
  EXPECT_EQ(io::report_from_json(slurp(dir / "k.json")).num_records, 4u);
  EXPECT_EQ(run(dir, "compute " + synth_file("d.bin") + " --drop-misclassified").exit_code, 2);
}

TEST_F(Cli, CorrelateSummaryAcrossFixtures) {
  const std::string tables =
      fixture("cifar10.csv").string() + " " + fixture("mnist.csv").string() + " " + fixture("fashion_mnist.csv").string();
  const auto res =
      run(dir, "correlate " + tables + " --targets ROBY_2 --against ASR_2 --summary -o " + (dir / "c.csv").string());
  ASSERT_EQ(res.exit_code, 0) << res.err;
  const auto csv = slurp(dir / "c.csv");
  const auto pos = csv.find("ROBY_2,ASR_2,");
  ASSERT_NE(pos, std::string::npos);
  const auto mean_line = csv.substr(csv.rfind("ROBY_2,ASR_2,"));
  EXPECT_NE(mean_line.find(",mean"), std::string::npos);
  const double r = std::stod(mean_line.substr(std::string("ROBY_2,ASR_2,").size()));
  EXPECT_NEAR(r, 0.976, 0.05);
}

TEST_F(Cli, CorrelateSelfAndConstantColumn) {
  const auto self = run(dir, "correlate " + fixture("mnist.csv").string() + " --targets ASR_2 --against ASR_2");
  ASSERT_EQ(self.exit_code, 0);
  EXPECT_NE(self.out.find("r=1 "), std::string::npos) << self.out;

  std::ofstream(dir / "const.csv") << "model,ACC,ASR_INF,FSA_INF,FSD_INF,ROBY_INF,ASR_2,FSA_2,FSD_2,ROBY_2\n"
                                      "a,0.5,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n"
                                      "b,0.5,0.2,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n"
                                      "c,0.5,0.3,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n";
  const auto bad = run(dir, "correlate " + (dir / "const.csv").string() + " --targets ACC --against ASR_INF");
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_NE(bad.err.find("ZeroVariance"), std::string::npos);
  EXPECT_EQ(run(dir, "correlate " + fixture("mnist.csv").string() + " --targets NOPE --against ASR_2").exit_code, 2);
}

TEST_F(Cli, RankPrintsOrder) {
  const auto res = run(dir, "rank " + fixture("cifar10.csv").string() + " --column ASR_INF");
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.out.substr(0, res.out.find('\n')), "SqueezeNet");
  EXPECT_TRUE(res.out.ends_with("ResNet101\n"));
  const auto asc = run(dir, "rank " + fixture("cifar10.csv").string() + " --column ASR_INF --ascending");
  EXPECT_EQ(asc.out.substr(0, asc.out.find('\n')), "ResNet101");
}

TEST_F(Cli, SynthThenValidate) {
  const auto path = (dir / "s.bin").string();
  ASSERT_EQ(run(dir, "synth -o " + path + " --classes 4 --samples 12 --dims 3 --seed 5").exit_code, 0);
  const auto ds = io::load_embeddings(path);
  EXPECT_EQ(ds.num_classes(), 4u);
  EXPECT_EQ(io::embeddings_to_binary(ds), io::embeddings_to_binary(generate_blobs(SynthSpec{4, 12, 3, 1.0, 1.0, 5})));

  const auto ok = run(dir, "validate " + path);
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_NE(ok.out.find("K=4"), std::string::npos);
  EXPECT_NE(ok.out.find("class 3: 12"), std::string::npos);
}

TEST_F(Cli, ValidateFailures) {
  const auto good = slurp(synth_file("g.bin"));
  std::ofstream(dir / "trunc.bin", std::ios::binary) << good.substr(0, good.size() - 3);
  const auto t = run(dir, "validate " + (dir / "trunc.bin").string());
  EXPECT_EQ(t.exit_code, 2);
  EXPECT_NE(t.err.find("TruncatedFile"), std::string::npos);

  std::ofstream(dir / "skip.csv") << "index,label,e_0\n0,0,1\n1,2,2\n";
  const auto s = run(dir, "validate " + (dir / "skip.csv").string() + " --num-classes 3");
  EXPECT_EQ(s.exit_code, 2);
  EXPECT_NE(s.err.find("EmptyClass"), std::string::npos);
}

}  // namespace
}  // namespace roby
