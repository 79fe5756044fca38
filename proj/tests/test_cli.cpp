#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "dualrail/cli.hpp"
#include "dualrail/presets.hpp"

using namespace dualrail;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dualrail_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

// Clears DUALRAIL_CONFIG for the lifetime of the guard.
struct EnvGuard {
  explicit EnvGuard(const char* value = nullptr) {
    if (value != nullptr) {
      setenv(cli::kConfigEnv, value, 1);
    } else {
      unsetenv(cli::kConfigEnv);
    }
  }
  ~EnvGuard() { unsetenv(cli::kConfigEnv); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help exits cleanly") {
    CHECK(run({"--help"}).code == cli::kExitOk);
    CHECK(run({"gate", "--help"}).code == cli::kExitOk);
  }

  TEST_CASE("usage errors exit with 2") {
    EnvGuard env;
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"gap", "--no-such-flag"}).code == cli::kExitUsage);
    CHECK(run({"nonsense"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--axis", "v", "--from", "0.1", "--to", "0.0", "--points", "5"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--axis", "v", "--from", "0", "--to", "0.1", "--points", "0"}).code == cli::kExitUsage);
    CHECK(run({"gap", "--preset", "no-such-preset"}).code == cli::kExitUsage);
    CHECK(run({"gate", "--t-wait", "0.5"}).code == cli::kExitUsage);
    CHECK(run({"gap", "--t-wait", "0.9"}).code == cli::kExitUsage);
    CHECK(run({"gap", "--temp", "-3"}).code == cli::kExitUsage);
    CHECK(run({"table", "3"}).code == cli::kExitUsage);
    const auto r = run({"gap", "--config", "/nonexistent/presets.ini"});
    CHECK(r.code == cli::kExitUsage);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("numerical failures exit with 3") {
    const auto r = run({"optimize", "--omega-mhz", "2", "--sign", "-1", "--bracket", "0.005"});
    CHECK(r.code == cli::kExitNumeric);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("restore summary on stdout") {
    EnvGuard env;
    const auto r = run({"restore", "--v", "0.05"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(std::regex_search(r.out, std::regex("population error +1\\.0[0-9]*e-05")));
    CHECK(r.out.find("wall time") != std::string::npos);
  }

  TEST_CASE("JSON output is versioned and reproducible") {
    EnvGuard env;
    const auto a = scratch("gate_a.json");
    const auto b = scratch("gate_b.json");
    REQUIRE(run({"gate", "--v", "0.1", "--vt", "-0.05", "--out", a.string(), "--format", "json"}).code == 0);
    REQUIRE(run({"gate", "--v", "0.1", "--vt", "-0.05", "--out", b.string(), "--format", "json"}).code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc.at("schema") == 1);
    CHECK(doc.contains("e_ro"));
    CHECK(doc.at("e_ro").get<double>() >= 0.0);
    CHECK(text.find("wall") == std::string::npos);
  }

  TEST_CASE("sweep CSV is ordered, 12-digit and byte-identical across runs and thread counts") {
    EnvGuard env;
    const auto a = scratch("sweep_a.csv");
    const auto b = scratch("sweep_b.csv");
    const std::vector<std::string> base{"sweep", "--axis", "v", "--protocol", "gap", "--from", "-0.1",
                                        "--to",  "0.1",    "--points", "9"};
    auto with = [&](const fs::path& p, const char* threads) {
      auto args = base;
      for (const char* s : {"--out", p.c_str(), "--format", "csv", "--threads", threads}) args.emplace_back(s);
      return args;
    };
    REQUIRE(run(with(a, "1")).code == 0);
    REQUIRE(run(with(b, "4")).code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));

    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "v_mps,z0_um,pop_error,phase_rad,r3_leak,rydberg_time_us");
    double prev = -1e9;
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::istringstream cells(line);
      std::string c;
      std::getline(cells, c, ',');
      const double v = std::stod(c);
      CHECK(v > prev);
      prev = v;
      std::getline(cells, c, ',');
      std::getline(cells, c, ',');
      // at most 12 significant digits
      std::string digits;
      for (char ch : c.substr(0, c.find('e'))) {
        if (std::isdigit(static_cast<unsigned char>(ch))) digits += ch;
      }
      digits.erase(0, digits.find_first_not_of('0'));
      CHECK(digits.size() <= 12);
    }
    CHECK(rows == 9);
  }

  TEST_CASE("config file named by the environment supplies extra presets") {
    auto cfgs = builtin_configs();
    auto custom = builtin_config("rb87-5p12");
    custom.name = "my-trap";
    cfgs.push_back(custom);
    const auto path = scratch("presets.ini");
    {
      std::ofstream f(path);
      f << format_presets(cfgs);
    }
    {
      EnvGuard env;
      CHECK(run({"gap", "--preset", "my-trap"}).code == cli::kExitUsage);
    }
    EnvGuard env(path.c_str());
    const auto via_env = run({"gap", "--preset", "my-trap", "--v", "0.05"});
    CHECK(via_env.code == cli::kExitOk);
    const auto builtin = run({"gap", "--preset", "rb87-5p12", "--v", "0.05"});
    // the header line names the preset; the numbers must agree
    auto body = [](const std::string& s) {
      const auto start = s.find('\n');
      return s.substr(start, s.find("wall time") - start);
    };
    CHECK(body(via_env.out) == body(builtin.out));
    CHECK(run({"gap", "--preset", "my-trap", "--config", "/nonexistent.ini"}).code == cli::kExitUsage);
  }

  TEST_CASE("optimize CSV columns") {
    EnvGuard env;
    const auto p = scratch("opt.csv");
    REQUIRE(run({"optimize", "--omega-mhz", "1", "--sign", "-1", "--out", p.string(), "--format", "csv"}).code == 0);
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    CHECK(line == "omega_mhz,sign,omega_dp_mhz,ratio,error,error_at_omega,evaluations");
    std::getline(in, line);
    CHECK(line.rfind("1,-1,-1.06", 0) == 0);
  }

  TEST_CASE("the installed binary forwards its arguments") {
    const std::string tool = DUALRAIL_TOOL;
    CHECK(std::system((tool + " --help > /dev/null").c_str()) == 0);
    const int status = std::system((tool + " gap --bogus > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == cli::kExitUsage);
  }
}
