#include "plastic/cli.hpp"
#include "plastic/report.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using plastic::Json;

namespace {

struct Result
{
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  Result r;
  r.code = plastic::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const char *name)
{
  return std::string(PLASTIC_DATA_DIR) + "/" + name;
}

std::vector<std::string> lines(const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    out.push_back(line);
  }
  return out;
}

bool ascii(const std::string &s)
{
  for (unsigned char c : s) {
    if (c > 127) {
      return false;
    }
  }
  return true;
}

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("factors prints one factor per line")
  {
    auto const r = run({"factors", data("fibonacci.sub"), "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "aab\naba\nbaa\nbab\n");
    CHECK(r.err.empty());
    auto const csv = run({"factors", data("thue-morse.sub"), "--n", "2", "--format", "csv"});
    CHECK(lines(csv.out) == std::vector<std::string>{"factor", "aa", "ab", "ba", "bb"});
  }

  TEST_CASE("spectral reports the golden mean")
  {
    auto const r = run({"spectral", data("fibonacci.sub")});
    REQUIRE(r.code == 0);
    auto const j = Json::parse(r.out);
    CHECK(j["command"] == "spectral");
    CHECK(j["result"]["perron_value"].get<double>() == doctest::Approx(1.6180339887));
    CHECK(j["result"]["matrix"] == Json::parse("[[1,1],[1,0]]"));
    CHECK(j["result"]["pisot_certificate"] == true);
    CHECK(j["input_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  }

  TEST_CASE("balance on Thue-Morse stays at most 2 for letters")
  {
    auto const r = run({"balance", data("thue-morse.sub"), "--max-n", "100"});
    REQUIRE(r.code == 0);
    auto const rows = lines(r.out);
    CHECK(rows.front() == "target,n,min,max,balance");
    CHECK(rows.size() == 1 + 2 * 100);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      auto const balance = std::stoi(rows[k].substr(rows[k].rfind(',') + 1));
      CHECK(balance <= 2);
    }
    CHECK(ascii(r.out));
  }

  TEST_CASE("balance for words and collared letters")
  {
    auto const w = run({"balance", data("thue-morse.sub"), "--max-n", "5", "--word", "ab"});
    REQUIRE(w.code == 0);
    CHECK(lines(w.out)[2] == "ab,3,0,1,1");
    auto const c = run({"balance", data("fibonacci.sub"), "--max-n", "4", "--collar", "1",
                        "--format", "json"});
    REQUIRE(c.code == 0);
    auto const j = Json::parse(c.out);
    CHECK(j["result"].size() == 4);
    CHECK(j["result"][0]["target"] == "aab");
  }

  TEST_CASE("plasticity verdicts")
  {
    auto const f = run({"plasticity", data("fibonacci.sub"), "--to", "2,1", "--max-n", "300"});
    REQUIRE(f.code == 0);
    auto const fj = Json::parse(f.out)["result"];
    CHECK(fj["letters"] == "PLASTIC_CERTIFIED");
    CHECK(fj["total"] == "TOTALLY_PLASTIC_EVIDENCE");
    CHECK(fj["decomposition"]["contracting"] == "CONTRACTING");

    auto const t = run({"plasticity", data("thue-morse.sub"), "--to", "2,1"});
    REQUIRE(t.code == 0);
    auto const tj = Json::parse(t.out)["result"];
    CHECK(tj["letters"] == "PLASTIC_CERTIFIED");
    CHECK(tj["total"] == "GROWTH_OBSERVED");
    CHECK(tj["growing_words"].size() > 0);
  }

  TEST_CASE("conjugacy summary and trace")
  {
    auto const s = run({"conjugacy", data("fibonacci.sub"), "--from", "1,1", "--to", "2,1",
                        "--samples", "10", "--origins", "10"});
    REQUIRE(s.code == 0);
    auto const j = Json::parse(s.out)["result"];
    CHECK(j["converged"] == true);
    CHECK(j["pooled_rate"].get<double>() > 0.5);
    CHECK(j["equivariance_residual"].get<double>() < 1e-6);

    auto const t = run({"conjugacy", data("fibonacci.sub"), "--to", "2,1", "--index", "500",
                        "--offset", "0.5", "--format", "csv"});
    REQUIRE(t.code == 0);
    CHECK(lines(t.out).front() == "level,shift,offset,gap,discrepancy");
  }

  TEST_CASE("Sturmian balance is flagged one-sided")
  {
    auto const r = run({"sturmian", "--alpha", "0.6180339887498949", "--length", "1000",
                        "--max-n", "20"});
    REQUIRE(r.code == 0);
    auto const rows = lines(r.out);
    CHECK(rows.front() == "target,n,min,max,balance,evidence");
    CHECK(rows[1].substr(rows[1].rfind(',') + 1) == "one-sided");
  }

  TEST_CASE("tm-adversary")
  {
    auto const r = run({"tm-adversary", "--m", "1"});
    REQUIRE(r.code == 0);
    auto const j = Json::parse(r.out)["result"];
    CHECK(j["length"] == 5);
    CHECK(j["ab_ba_count"] == 3);
    CHECK(j["excess"].get<double>() == doctest::Approx(0.333333333333));
  }

  TEST_CASE("output is deterministic and can go to a file")
  {
    auto const a = run({"plasticity", data("thue-morse.sub"), "--to", "2,1", "--max-n", "200"});
    auto const b = run({"plasticity", data("thue-morse.sub"), "--to", "2,1", "--max-n", "200"});
    CHECK(a.out == b.out);
    std::string const path = "cli_test_output.json";
    auto const f = run({"spectral", data("fibonacci.sub"), "--out", path});
    CHECK(f.code == 0);
    CHECK(f.out.empty());
    std::ifstream in(path);
    std::stringstream written;
    written << in.rdbuf();
    CHECK(written.str() == run({"spectral", data("fibonacci.sub")}).out);
    std::remove(path.c_str());
  }

  TEST_CASE("exit codes")
  {
    CHECK(run({}).code == 1);
    CHECK(run({"factors", data("fibonacci.sub")}).code == 1);
    CHECK(run({"factors", "/nonexistent.sub", "--n", "2"}).code == 1);
    CHECK(run({"spectral", data("fibonacci.sub"), "--format", "csv"}).code == 1);
    CHECK(run({"plasticity", data("fibonacci.sub"), "--to", "2,1,3"}).code == 1);

    auto const np = run({"conjugacy", data("non-pisot.sub"), "--to", "2,1"});
    CHECK(np.code == 2);
    CHECK(np.out.empty());
    CHECK(np.err.find("NOT_CONTRACTING") != std::string::npos);

    auto const pd = run({"conjugacy", data("period-doubling.sub"), "--to", "2,1"});
    CHECK(pd.code == 2);
    CHECK(pd.err.find("INDETERMINATE") != std::string::npos);

    auto const slow =run({"conjugacy", data("fibonacci.sub"), "--to", "2,1", "--max-level",
                           "4", "--index", "1000", "--offset", "0.3"});
    CHECK(slow.code == 3);
    CHECK(slow.err.find("gaps") != std::string::npos);
  }

  TEST_CASE("help exits cleanly")
  {
    auto const r = run({"--help"});
    CHECK(r.code == 0);
  }
}
