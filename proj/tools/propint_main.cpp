#include <iostream>
#include <string>
#include <vector>

#include "propint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = propint::cli::execute(args);
  std::cout << result.stdout_payload;
  std::cerr << result.stderr_payload;
  return result.exit_code;
}
