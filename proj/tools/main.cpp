#include <iostream>

#include "lipaging/cli.hpp"

int main(int argc, char** argv) {
  return lipaging::cli::run(argc, argv, std::cout, std::cerr);
}
