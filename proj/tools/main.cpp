#include <iostream>
#include <string>
#include <vector>

#include "ntnsplit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ntnsplit::run_cli(args, std::cout, std::cerr);
}
