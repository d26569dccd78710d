#include <iostream>
#include <string>
#include <vector>

#include "apcharge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return apcharge::run_command(args, std::cout, std::cerr);
}
