// golden_runner CASES FIXTURES EXPECTED WORKDIR (NAME | --all) [--update]
//
// Runs a case twice through the CLI entry point, requires byte-identical output,
// and compares it with EXPECTED/NAME.golden.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "convalg/cli.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run_once(const nlohmann::json& c, const fs::path& fixtures, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  for (const auto& entry : fs::directory_iterator(fixtures)) fs::copy_file(entry.path(), work / entry.path().filename());
  const fs::path saved = fs::current_path();
  fs::current_path(work);
  std::ostringstream out, err;
  const int code = convalg::run_cli(c.at("args").get<std::vector<std::string>>(), out, err);
  std::string text = "exit " + std::to_string(code) + "\n--- stdout\n" + out.str() + "--- stderr\n" + err.str();
  if (c.contains("out")) text += "--- " + c["out"].get<std::string>() + "\n" + slurp(c["out"].get<std::string>());
  fs::current_path(saved);
  return text;
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 6) {
    std::cerr << "usage: golden_runner CASES FIXTURES EXPECTED WORKDIR (NAME | --all) [--update]\n";
    return 2;
  }
  const nlohmann::json cases = nlohmann::json::parse(slurp(argv[1]));
  const fs::path fixtures = fs::absolute(argv[2]), expected = fs::absolute(argv[3]), work = fs::absolute(argv[4]);
  const std::string which = argv[5];
  const bool update = argc > 6 && std::string(argv[6]) == "--update";

  int failures = 0, ran = 0;
  for (const auto& c : cases) {
    const std::string name = c.at("name");
    if (which != "--all" && which != name) continue;
    ++ran;
    const std::string first = run_once(c, fixtures, work / name), second = run_once(c, fixtures, work / name);
    const fs::path golden = expected / (name + ".golden");
    if (first != second) {
      std::cerr << name << ": two runs differ\n";
      ++failures;
      continue;
    }
    if (update) {
      std::ofstream(golden, std::ios::binary) << first;
      std::cout << "wrote " << golden.string() << "\n";
      continue;
    }
    if (!fs::exists(golden)) {
      std::cerr << name << ": missing " << golden.string() << "\n";
      ++failures;
      continue;
    }
    const std::string want = slurp(golden);
    if (want != first) {
      std::cerr << name << ": output differs from " << golden.string() << "\n--- expected\n"
                << want << "--- actual\n"
                << first;
      ++failures;
    } else {
      std::cout << name << ": identical\n";
    }
  }
  if (ran == 0) {
    std::cerr << "no case named " << which << "\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
