#include <iostream>
#include <string>
#include <vector>

#include "cavityroute/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cavityroute::run_command(args, std::cout, std::cerr);
}
