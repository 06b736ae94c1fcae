#include <iostream>
#include <string>
#include <vector>

#include "propcheck/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return propcheck::cli::run_cli(std::move(args), std::cin, std::cout, std::cerr);
}
