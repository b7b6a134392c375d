#include <iostream>

#include "wright_poisson/cli.hpp"

int main(int argc, char** argv) {
  return wright_poisson::cli::run(argc, argv, std::cout, std::cerr);
}
