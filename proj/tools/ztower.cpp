#include <iostream>
#include <string>
#include <vector>

#include "ztower/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ztower::run_cli(args, std::cout, std::cerr);
}
