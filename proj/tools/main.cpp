#include <iostream>
#include <string>
#include <vector>

#include "aaq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aaq::run(std::move(args), std::cout, std::cerr);
}
