#include <iostream>

#include "fhn/commands.hpp"

int main(int argc, char** argv) { return fhn::cli::run(argc, argv, std::cout, std::cerr); }
