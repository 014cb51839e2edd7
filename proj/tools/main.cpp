#include <iostream>

#include "invsched/cli.hpp"

int main(int argc, char** argv) {
  return invsched::cli::run(argc, argv, std::cout, std::cerr);
}
