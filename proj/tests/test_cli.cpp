#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string(GKZCC_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "gkzcc_cli_capture.txt";
  const std::string cmd = std::string(GKZCC_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli reports analysis results as json") {
  auto text = run_capture("analyze --matrix \"[[0,1,5]]\" --prime 5");
  auto doc = nlohmann::json::parse(text);
  CHECK(doc["non_confluent"]["value"] == true);
  CHECK(doc["p_nondegeneracy"]["value"] == false);
  CHECK(doc["p_nondegeneracy"]["failing"][0] == nlohmann::json::array({1, 3}));
  CHECK(doc["p_nondegeneracy"]["dimension_excess"][0]["dim"] == 4);
}

TEST_CASE("cli exit codes") {
  CHECK(run("analyze --matrix \"[[0,0,1]]\" --prime 7") == 0);
  CHECK(run("analyze --matrix \"[[0,0,1]\"") == 2);           // malformed JSON
  CHECK(run("analyze --matrix \"not json\"") == 2);
  CHECK(run("cc --matrix \"[[0,0,1]]\" --prime 7 --char-order 6 --char 0,1") == 3);
  CHECK(run("cc --matrix \"[[0,1,5]]\" --prime 5 --char-order 4 --char 1,1") == 4);
  CHECK(run("conormal --matrix \"[[0,1,2]]\" --theta 1,2 --chart 0 --infinity") == 3);
  CHECK(run("resolve --matrix \"[[1,0],[0,1]]\" --fan "
            "\"{\\\"d\\\":2,\\\"cones\\\":[[[1,0],[0,1]]]}\"") == 3);
}

TEST_CASE("cli umbrella and cc are deterministic") {
  auto a = run_capture("cc --matrix \"[[0,0,1]]\" --prime 7 --char-order 6 --char 1,1");
  auto b = run_capture("cc --matrix \"[[0,0,1]]\" --prime 7 --char-order 6 --char 1,1");
  CHECK(a == b);
  auto doc = nlohmann::json::parse(a);
  CHECK(doc["cycle"]["components"].size() == 4);
  CHECK(doc["cycle"]["sign_exp"] == 4);
}

TEST_CASE("cli accepts config files with flag overrides") {
  const fs::path cfg = fs::temp_directory_path() / "gkzcc_cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"matrix": [[0,0,1]], "prime": 7, )"
        << R"("character": {"order": 6, "exponents": [1, 1]}})";
  }
  CHECK(run("cc --config " + cfg.string()) == 0);
  CHECK(run("umbrella --config " + cfg.string()) == 0);
}

TEST_CASE("cli golden example comparison") {
  const std::string golden = GKZCC_GOLDEN_DIR;
  REQUIRE(fs::is_directory(golden));
  CHECK(run("examples --dir " + golden) == 0);
  CHECK(run("examples --dir /nonexistent/golden/dir") == 2);

  // perturbation must be caught with exit 1
  const fs::path tmp = fs::temp_directory_path() / "gkzcc_golden_perturbed";
  fs::remove_all(tmp);
  fs::copy(golden, tmp, fs::copy_options::recursive);
  {
    std::ofstream out(tmp / "example_1.json", std::ios::app);
    out << "perturbation\n";
  }
  CHECK(run("examples --dir " + tmp.string()) == 1);
}
