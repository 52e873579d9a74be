#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hierq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> env_tol;
  if (const char* env = std::getenv("HIERQ_TOLERANCE")) env_tol = env;
  return hierq::cli::run(args, std::cout, std::cerr, env_tol);
}
