#include <iostream>

#include "opasim/cli.h"

int main(int argc, char** argv) {
  return opasim::RunCli(argc, argv, std::cout, std::cerr);
}
