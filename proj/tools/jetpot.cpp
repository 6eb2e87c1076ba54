#include <iostream>
#include <string>
#include <vector>

#include "jetpot/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return jetpot::dispatch(args, std::cout, std::cerr);
}
