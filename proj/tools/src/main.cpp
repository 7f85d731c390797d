#include <iostream>

#include "ricci_lab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ricci_lab::run(args, std::cout, std::cerr);
}
