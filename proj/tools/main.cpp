#include "himix/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return himix::cli_dispatch(args, std::cout, std::cerr);
}
