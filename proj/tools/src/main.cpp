#include <iostream>

#include "irsopt/cli.hpp"

int main(int argc, char** argv) { return irsopt::cli::main(argc, argv, std::cout, std::cerr); }
