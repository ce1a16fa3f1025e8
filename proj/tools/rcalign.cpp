#include <iostream>

#include "rcnu/cli.hpp"

int main(int argc, char** argv) {
  return rcnu::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
