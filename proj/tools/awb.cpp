#include <iostream>
#include <string>
#include <vector>

#include "awb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return awb::cli::dispatch(args, std::cout, std::cerr);
}
