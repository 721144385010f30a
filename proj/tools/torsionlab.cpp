#include <iostream>

#include "torsionlab/cli.hpp"

int main(int argc, char** argv) {
  return torsionlab::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
