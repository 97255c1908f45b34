#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "marton/cli.hpp"
#include "marton/joint_io.hpp"
#include "marton/reduction.hpp"

using namespace marton;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("marton_" + name); }

}  // namespace

TEST_CASE("sum-rate") {
  const auto r = run({"sum-rate", "--alpha", "0.01", "--beta", "0.99", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "inner,outer,gap");
  double inner = 0, outer = 0, gap = 0;
  char c1 = 0, c2 = 0;
  std::istringstream(row) >> inner >> c1 >> outer >> c2 >> gap;
  const double cap = 1 - oracle::binary_entropy(0.01);
  CHECK(std::fabs(inner - cap) <= 2e-3);
  CHECK(std::fabs(outer - cap) <= 2e-3);
  CHECK(std::fabs(gap) <= 2e-3);

  const auto useless = run({"sum-rate", "--alpha", "0.5", "--beta", "0.5", "--format", "csv"});
  CHECK(useless.code == 0);
  CHECK(useless.out == "inner,outer,gap\n0,0,0\n");

  const auto text = run({"sum-rate", "--alpha", "0.01", "--beta", "0.5", "--starts", "8"});
  CHECK(text.code == 0);
  CHECK(text.out.find("outer") != std::string::npos);
  CHECK(text.out.find("lower bound") != std::string::npos);
}

TEST_CASE("sum-rate argument errors") {
  const auto none = run({"sum-rate"});
  CHECK(none.code == 2);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(run({"sum-rate", "--alpha", "0.1"}).code == 2);
  CHECK(run({"sum-rate", "--alpha", "0.1", "--beta", "1.0"}).code == 2);
  CHECK(run({"sum-rate", "--alpha", "0.1", "--beta", "0.2", "--channel", "x.txt"}).code == 2);
  CHECK(run({"sum-rate", "--alpha", "0.1", "--beta", "0.2", "--format", "json"}).code == 2);
  CHECK(run({"sum-rate", "--channel", "/nonexistent/channel.txt"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);

  const auto path = scratch("zero_channel.txt");
  save_channel(product_channel({{1.0, 0.0}, {0.3, 0.7}}, {{0.6, 0.4}, {0.2, 0.8}}), path);
  CHECK(run({"sum-rate", "--channel", path.string()}).code == 1);
  const auto permissive = run({"sum-rate", "--channel", path.string(), "--permissive", "--starts", "4"});
  CHECK(permissive.code == 0);
  CHECK(permissive.out.find("warning") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("sweep") {
  const auto r = run({"sweep", "--alpha", "0.01", "--beta-min", "0.2", "--beta-max", "0.99",
                      "--steps", "3", "--starts", "8"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "beta,inner,outer,gap");
  CHECK(lines[1].rfind("0.2,", 0) == 0);
  CHECK(lines[3].rfind("0.99,", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);

  const auto rows = sweep(0.01, 0.2, 0.99, 3, [] {
    OptimizationConfig c;
    c.starts = 8;
    return c;
  }());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].gap == rows[i].outer - rows[i].inner);
    CHECK(rows[i].gap >= -1e-6);
    if (i) CHECK(rows[i].beta > rows[i - 1].beta);
  }
  CHECK(rows.back().gap <= 2e-3);

  const auto path = scratch("sweep.csv");
  CHECK(run({"sweep", "--beta-min", "0.3", "--beta-max", "0.3", "--steps", "1", "--starts", "4",
             "--out", path.string()})
            .code == 0);
  std::ifstream file(path);
  std::getline(file, line);
  CHECK(line == "beta,inner,outer,gap");
  fs::remove(path);

  CHECK(run({"sweep", "--steps", "0"}).code == 2);
  CHECK(run({"sweep", "--beta-min", "0"}).code == 2);
  CHECK(run({"sweep", "--beta-max", "1.2"}).code == 2);
  CHECK(run({"sweep", "--beta-min", "0.6", "--beta-max", "0.4"}).code == 2);
  CHECK(run({"sweep", "--grid-points", "100"}).code == 1);
}

TEST_CASE("verify") {
  const auto ok = run({"verify", "lemma3", "--trials", "5", "--seed", "3"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("5/5 passed") != std::string::npos);
  CHECK(run({"verify", "appendix-vi", "--trials", "20"}).code == 0);
  CHECK(run({"verify", "lemma3", "--trials", "0"}).code == 2);
  CHECK(run({"verify", "lemma4"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  // Same arguments, same bytes.
  CHECK(run({"verify", "lemma3", "--trials", "5", "--seed", "3"}).out == ok.out);
}

TEST_CASE("joint files") {
  Rng rng(9);
  const auto j = fixtures::random_joint(rng, {{"U", 2}, {"W", 3}, {"X", 2}});
  std::stringstream buf;
  write_joint(buf, j);
  const auto back = parse_joint(buf);
  CHECK(back.axes() == j.axes());
  for (std::size_t i = 0; i < j.atom_count(); ++i) CHECK(back.probs()[i] == j.probs()[i]);

  std::istringstream bad_header("U:2 V\n0.5 0.5\n");
  CHECK_THROWS_AS(parse_joint(bad_header), ParseError);
  std::istringstream short_row("# comment\nU:2 X:2\n0.25 0.25\n0.5\n");
  try {
    parse_joint(short_row, "j.txt");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("reduce w") {
  Rng rng(10);
  const auto ch = random_channel(4, 2, 2, 2);
  const auto in = scratch("joint_in.txt"), chan = scratch("chan.txt"), out = scratch("joint_out.txt");
  save_channel(ch, chan);
  save_joint(fixtures::random_joint(rng, {{"U", 2}, {"V", 2}, {"W", 10}, {"X", 2}}), in);
  const auto r = run({"reduce", "w", "--in", in.string(), "--channel", chan.string(), "--out",
                      out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("status: reduced") != std::string::npos);
  CHECK(support_size(load_joint(out), "W") <= 6);
  CHECK(r.out.find("I(W;Y),") != std::string::npos);

  const auto small = fixtures::random_joint(rng, {{"U", 2}, {"V", 2}, {"W", 4}, {"X", 2}});
  save_joint(small, in);
  const auto same = run({"reduce", "w", "--in", in.string(), "--channel", chan.string(), "--out",
                         out.string()});
  CHECK(same.code == 0);
  CHECK(same.out.find("already") != std::string::npos);
  const auto reloaded = load_joint(out);
  for (std::size_t i = 0; i < small.atom_count(); ++i)
    CHECK(reloaded.probs()[i] == small.probs()[i]);

  std::ofstream(in) << "U:2 V:2 W:2 X:2\n0.1 0.1\n0.1 zz\n";
  const auto broken = run({"reduce", "w", "--in", in.string(), "--channel", chan.string(), "--out",
                           out.string()});
  CHECK(broken.code == 1);
  CHECK(broken.err.find(":3:") != std::string::npos);
  CHECK(run({"reduce", "w", "--in", in.string()}).code == 2);
  for (const auto& p : {in, chan, out}) fs::remove(p);
}
