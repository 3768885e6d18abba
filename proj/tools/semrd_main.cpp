#include <iostream>
#include <string>
#include <vector>

#include "semrd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semrd::run(args, std::cout, std::cerr);
}
