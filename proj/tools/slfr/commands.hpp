#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace slfr::cli {

enum ExitCode : int { kPass = 0, kFailure = 1, kUsage = 2 };

struct RunConfig {
  int K = 4;
  int N = 2;
  int t = 1;
  std::string q = "2";
  std::size_t B = 0;  // 0: one symbol per subfile
  std::uint64_t seed = 1;
  std::string alpha = "wan";
  std::string alpha_path;  // for "--alpha from-file PATH"
  std::string demands = "random";
  bool exhaustive = false;
  std::size_t samples = 100;
  std::optional<int> rank;
  std::string out;
  std::string format = "text";
  std::string which;  // demo name
  std::size_t trials = 50;
};

int cmd_graph(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_demo(const RunConfig& config);

}  // namespace slfr::cli
