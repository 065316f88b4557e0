#include <iostream>

#include "coulomb/cli.hpp"

int main(int argc, char** argv) { return cgas::run_cli(argc, argv, std::cout, std::cerr); }
