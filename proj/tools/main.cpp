#include <iostream>
#include <string>
#include <vector>

#include "maxpart/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return maxpart::cli::run(args, std::cout, std::cerr);
}
