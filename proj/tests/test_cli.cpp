#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

const std::string kCli = DPPKM_CLI_PATH;
const std::string kData = DPPKM_DATA_DIR;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "dppkm_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

Result run(const std::string& args) {
  const auto err_path = (scratch() / "stderr.txt").string();
  const std::string cmd = kCli + " " + args + " 2>" + err_path;
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::size_t data_rows(const std::string& tsv) {
  std::istringstream in(tsv);
  std::string line;
  std::size_t rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("help documents every subcommand") {
  const auto r = run("--help");
  CHECK(r.code == 0);
  for (const char* sub : {"synth", "bench", "screenplay", "verify", "sample", "dpp-diag"}) {
    CHECK(r.out.find(sub) != std::string::npos);
  }
  const auto v = run("verify --help");
  CHECK(v.code == 0);
  CHECK(v.out.find("--bigd") != std::string::npos);
  CHECK(v.out.find("--eps-grid") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("synth --no-such-flag").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("synth --methods rand,kmedoids --runs 1 --grids 1").code == 2);
  CHECK(run("synth --grids 2,x").code == 2);
  CHECK(run("synth --runs 0").code == 2);
  CHECK(run("bench").code == 2);
  const auto k0 = run("sample --mode kdpp --k 0");
  CHECK(k0.code == 2);
  CHECK(k0.err.find("--k") != std::string::npos);
  CHECK(run("sample --mode bogus --data " + kData + "/iris.csv").code == 2);
}

TEST_CASE("verify below the separation bound cites the bound") {
  const auto r = run("verify --sigma 1.0 --bigd 0.5");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("0.669") != std::string::npos);
  CHECK(r.err.find("sqrt(ln 6 / (4 sigma))") != std::string::npos);
}

TEST_CASE("verify writes the epsilon scan") {
  const auto r = run("verify --sigma 1.0 --bigd 2.0 --eps-grid 50");
  CHECK(r.code == 0);
  CHECK(data_rows(r.out) == 50);
  CHECK(r.out.find("# bigd=2") != std::string::npos);
  CHECK(r.out.find("chain_violations=0") != std::string::npos);
}

TEST_CASE("runtime errors exit with 1") {
  const auto r = run("bench --data " + kData + "/no_such_file.csv --label-col 4 --runs 1");
  CHECK(r.code == 1);
  CHECK(r.err.find("no_such_file") != std::string::npos);
  CHECK(run("sample --mode kdpp --k 151 --data " + kData + "/iris.csv --label-col 4").code == 1);
}

TEST_CASE("synth output is byte-identical across runs, targets and worker counts") {
  const std::string args = "synth --grids 2 --runs 1 --methods dppk --seed 7";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
  const auto file = (scratch() / "synth.tsv").string();
  CHECK(run(args + " -o " + file).code == 0);
  CHECK(slurp(file) == a.out);

  const auto j1 = run("synth --grids 2,3 --runs 4 --points 30 --seed 3 --jobs 1");
  const auto j3 = run("synth --grids 2,3 --runs 4 --points 30 --seed 3 --jobs 3");
  CHECK(j1.out == j3.out);
  CHECK(j1.out.find("# methods=rand,pp,dpp,dppk") != std::string::npos);
  CHECK(j1.out.find("# seed=3") != std::string::npos);
}

TEST_CASE("bench, sample and dpp-diag on iris") {
  const std::string iris = kData + "/iris.csv";
  const auto b = run("bench --data " + iris + " --label-col 4 --runs 3 --seed 1");
  CHECK(b.code == 0);
  CHECK(data_rows(b.out) == 3);
  CHECK(b.out.find("# sigma=") != std::string::npos);
  CHECK(b.out.find("(median heuristic)") != std::string::npos);

  const auto s = run("sample --data " + iris + " --label-col 4 --mode kdpp --k 3 --seed 5");
  CHECK(s.code == 0);
  CHECK(data_rows(s.out) == 3);
  CHECK(s.out == run("sample --data " + iris + " --label-col 4 --mode kdpp --k 3 --seed 5").out);
  CHECK(run("sample --data " + iris + " --label-col 4 --mode sequential --k 4").code == 0);
  CHECK(run("sample --data " + iris + " --label-col 4 --mode dpp").code == 0);

  const auto d = run("dpp-diag --data " + iris + " --label-col 4");
  CHECK(d.code == 0);
  CHECK(data_rows(d.out) == 150);
  CHECK(d.out.find("expected_size=") != std::string::npos);
}

TEST_CASE("screenplay subcommand") {
  const std::string dir = kData + "/screenplays/";
  const auto r = run("screenplay --input " + dir + "two_locations.txt --gold " + dir +
                     "two_locations.gold --input " + dir + "long_script.txt --gold - --runs 3 --seed 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("two_locations\t16\t2") != std::string::npos);
  CHECK(r.out.find("long_script\t137\tNA") != std::string::npos);
  CHECK(r.out.find("notice: long_script: no gold") != std::string::npos);

  CHECK(run("screenplay --input " + dir + "two_locations.txt --input " + dir +
            "long_script.txt --gold " + dir + "two_locations.gold")
            .code == 2);
}
