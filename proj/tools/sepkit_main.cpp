#include <iostream>
#include <string>
#include <vector>

#include "sepkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sepkit::cli::run(args, std::cout, std::cerr);
}
