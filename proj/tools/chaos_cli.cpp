#include <iostream>

#include "chaos/cli.hpp"

int main(int argc, char** argv) { return chaos::cli::main(argc, argv, std::cout, std::cerr); }
