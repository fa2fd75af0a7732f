#include <iostream>
#include <string>
#include <vector>

#include "psim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return psim::cli::run(args, std::cout, std::cerr);
}
