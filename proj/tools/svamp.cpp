#include <iostream>

#include "svamp/cli.hpp"

int main(int argc, char** argv) {
  return svamp::cli::run(argc, argv, std::cout, std::cerr);
}
