#include <cstdio>
#include <string>
#include <vector>

#include "swapgame/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const swapgame::CliResult res = swapgame::run_cli(args);
  std::fputs(res.out.c_str(), stdout);
  std::fputs(res.err.c_str(), stderr);
  return res.exit_code;
}
