#include <iostream>
#include <string>
#include <vector>

#include "sepidx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sepidx::run_cli(args, std::cout, std::cerr);
}
