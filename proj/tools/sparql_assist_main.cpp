#include <iostream>

#include "sparql_assist/cli.hpp"

int main(int argc, char** argv) {
  return sparql_assist::run_cli(argc, argv, std::cout, std::cerr, std::cin);
}
