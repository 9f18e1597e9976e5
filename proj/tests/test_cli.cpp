#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const std::string& work_dir() {
  static std::string dir = [] {
    std::string d = "/tmp/pcl_cli_" + std::to_string(::getpid());
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  std::string out_path = work_dir() + "/stdout.txt";
  std::string err_path = work_dir() + "/stderr.txt";
  std::string cmd = env_prefix + std::string(PCL_BIN_PATH) + " " + args + " >" + out_path +
                    " 2>" + err_path;
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and argument errors") {
  CHECK(run("--version").code == 0);
  CHECK(run("").code == 2);       // a subcommand is required
  CHECK(run("bogus").code == 2);  // unknown subcommand
  CHECK(run("sweep --nope 1 --limit 100").code == 2);
  CHECK(run("sweep --format yaml --limit 100").code == 2);
}

TEST_CASE("sieve: usage error, cache bytes, reload") {
  CHECK(run("sieve --limit 1").code == 2);

  std::string cache = work_dir() + "/sieve_cache.bin";
  fs::remove(cache);
  auto first = run("sieve --limit 2000 --cache " + cache);
  REQUIRE(first.code == 0);
  CHECK(first.out.find("limit=2000 entries=2001 primes=303 checksum=") !=
        std::string::npos);
  std::string bytes1 = slurp(cache);
  REQUIRE(bytes1.size() == 12 + 4 * 2001);
  CHECK(bytes1.rfind("PCL1", 0) == 0);

  fs::remove(cache);
  auto second = run("sieve --limit 2000 --cache " + cache);
  REQUIRE(second.code == 0);
  CHECK(slurp(cache) == bytes1);  // rebuilt cache is byte-identical

  auto third = run("sieve --limit 2000 --cache " + cache);  // loads, not rebuilds
  REQUIRE(third.code == 0);
  CHECK(third.out == first.out);
}

TEST_CASE("eval: weights as JSON") {
  auto nine = run("eval --n 9 --limit 100");
  REQUIRE(nine.code == 0);
  auto j9 = nlohmann::json::parse(nine.out);
  CHECK(j9["lambda"].get<double>() == doctest::Approx(1.0986122886681098).epsilon(1e-8));
  CHECK(j9["lambda0"].get<double>() == 0.0);
  CHECK(j9["upsilon"].get<double>() == j9["lambda"].get<double>());
  CHECK(j9["omega"] == 2);
  CHECK(j9["phi"] == 6);

  auto seven = run("eval --n 7 --limit 100");
  REQUIRE(seven.code == 0);
  auto j7 = nlohmann::json::parse(seven.out);
  CHECK(j7["lambda"].get<double>() == doctest::Approx(1.9459101490553132).epsilon(1e-8));
  CHECK(j7["lambda"].get<double>() == j7["lambda0"].get<double>());
  CHECK(j7["upsilon"].get<double>() == 0.0);
  CHECK(j7["omega"] == 1);
  CHECK(j7["phi"] == 6);

  auto one = run("eval --n 1 --limit 100");
  REQUIRE(one.code == 0);
  auto j1 = nlohmann::json::parse(one.out);
  CHECK(j1["lambda"].get<double>() == 0.0);
  CHECK(j1["lambda0"].get<double>() == 0.0);
  CHECK(j1["upsilon"].get<double>() == 0.0);
  CHECK(j1["omega"] == 0);
  CHECK(j1["phi"] == 1);

  CHECK(run("eval --n 200 --limit 100").code == 2);
  CHECK(run("eval --n 0 --limit 100").code == 2);
}

TEST_CASE("sweep: record counts, empty range, exit statuses") {
  auto empty = run("sweep --lo 9 --hi 9 --limit 100");
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());  // no even N: no records, not even a header
  CHECK(empty.err.find("records=0") != std::string::npos);

  auto general = run("sweep --lo 8 --hi 100 --limit 100 --class general --no-timestamp");
  CHECK(general.code == 0);
  CHECK(line_count(general.out) == 35);  // header + 34 general rows

  auto thousand = run("sweep --lo 8 --hi 1000 --limit 1000 --no-timestamp");
  CHECK(thousand.code == 0);  // no goldbach or relaxed failures
  CHECK(line_count(thousand.out) == 498);  // header + one row per even N

  auto conj = run("sweep --lo 8 --hi 100 --limit 100 --claims conjecture1");
  CHECK(conj.code == 1);  // the per-prime positivity claim has counterexamples

  CHECK(run("sweep --lo 8 --hi 100 --limit 100 --claims nonsense").code == 2);
  CHECK(run("sweep --lo 6 --hi 100 --limit 100").code == 2);  // lo below 8
}

TEST_CASE("check-conjecture names the first failing N") {
  auto r = run("check-conjecture --lo 50 --hi 80 --limit 100");
  CHECK(r.code == 1);
  CHECK(r.err.find("conjecture1_counterexamples=2 first=[54(2) 70(2)]") !=
        std::string::npos);
  CHECK(r.out.find("N,class,denominator,conjecture1,failing_primes,per_prime") !=
        std::string::npos);

  CHECK(run("check-theorem --lo 8 --hi 100 --limit 100").code == 0);
}

TEST_CASE("reproducible files with --no-timestamp across formats") {
  for (std::string fmt : {"csv", "json", "jsonl"}) {
    std::string f1 = work_dir() + "/rep1." + fmt;
    std::string f2 = work_dir() + "/rep2." + fmt;
    std::string base = "sweep --lo 8 --hi 60 --limit 100 --no-timestamp --format " + fmt;
    auto r1 = run(base + " --output " + f1);
    auto r2 = run(base + " --output " + f2);
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(r1.out.find("records=27") != std::string::npos);  // summary on stdout
    std::string b1 = slurp(f1), b2 = slurp(f2);
    REQUIRE(!b1.empty());
    CHECK(b1 == b2);
  }
}

TEST_CASE("flat config file fills defaults; flags win") {
  std::string cfg = work_dir() + "/run.cfg";
  {
    std::ofstream f(cfg);
    f << "limit=200\n"
      << "lo=80\n"
      << "hi=96\n"
      << "no-timestamp=true\n";
  }
  auto r = run("--config " + cfg + " sweep --lo 92");
  REQUIRE(r.code == 0);
  CHECK(line_count(r.out) == 4);  // header + evens 92 94 96
  CHECK(r.out.find("\n92,") != std::string::npos);
  CHECK(r.out.find("\n80,") == std::string::npos);  // config lo overridden by flag
  CHECK(r.out.find("# generated") == std::string::npos);
}

TEST_CASE("PCL_CACHE environment variable supplies the cache path") {
  std::string cache = work_dir() + "/env_cache.bin";
  fs::remove(cache);
  auto r = run("sieve --limit 500", "PCL_CACHE=" + cache + " ");
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(cache));
  CHECK(slurp(cache).rfind("PCL1", 0) == 0);

  // a sweep through the same env var reuses the cached table
  auto s = run("sweep --lo 8 --hi 20 --limit 500 --no-timestamp", "PCL_CACHE=" + cache + " ");
  CHECK(s.code == 0);
  CHECK(line_count(s.out) == 8);  // header + 7 evens
}

TEST_CASE("singular: product, tail, and per-N values") {
  auto r = run("singular --limit 1000 --n 10 --n 15 --n 8");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  double pi2 = j["pi2"].get<double>();
  CHECK(pi2 > 0.6);
  CHECK(pi2 < 0.7);
  CHECK(j["tail_bound"].get<double>() == doctest::Approx(1.0 / 999.0).epsilon(1e-12));
  CHECK(j["product_limit"] == 1000);
  CHECK(j["s_of_N"]["15"].get<double>() == 0.0);
  CHECK(j["s_of_N"]["10"].get<double>() ==
        doctest::Approx(pi2 * 8.0 / 3.0).epsilon(1e-12));
  CHECK(j["s_of_N"]["8"].get<double>() == 2.0 * pi2);

  auto bare = run("singular --limit 1000");
  REQUIRE(bare.code == 0);
  auto jb = nlohmann::json::parse(bare.out);
  CHECK(!jb.contains("s_of_N"));

  CHECK(run("singular --limit 1000 --n 2000").code == 2);
}

TEST_CASE("correlate: selected columns over an N interval") {
  auto r = run("correlate --lo 8 --hi 12 --limit 100 --weights upsilon");
  REQUIRE(r.code == 0);
  auto lines = [&] {
    std::vector<std::string> v;
    std::string cur;
    for (char c : r.out) {
      if (c == '\n') {
        v.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    return v;
  }();
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "N,upsilon");
  CHECK(lines[1] == "8,0.480453014");
  CHECK(lines[3] == "10,2.48390605");
  CHECK(lines[5] == "12,3.210402");

  auto all = run("correlate --lo 2 --hi 40 --limit 100");
  REQUIRE(all.code == 0);
  CHECK(all.out.rfind("N,lambda,lambda0,upsilon", 0) == 0);
  CHECK(line_count(all.out) == 40);

  // engine agreement on a small window, via the convolution route
  auto conv = run("correlate --lo 2 --hi 40 --limit 100 --engine convolution");
  REQUIRE(conv.code == 0);
  CHECK(conv.out == all.out);  // 9-digit text of both engines coincides here
}

}  // TEST_SUITE
