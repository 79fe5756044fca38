#include <iostream>
#include <string>
#include <vector>

#include "dualrail/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dualrail::cli::run(args, std::cout, std::cerr);
}
