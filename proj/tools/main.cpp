#include "procflow/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return procflow::run_command(args, std::cin, std::cout, std::cerr);
}
