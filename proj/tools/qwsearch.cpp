#include <iostream>

#include "qwsearch/cli.hpp"

int main(int argc, char** argv) {
  return qwsearch::cli::run(argc, argv, std::cout, std::cerr);
}
