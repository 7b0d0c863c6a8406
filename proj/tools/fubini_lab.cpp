#include <iostream>

#include "fubini/cli.hpp"

int main(int argc, char** argv) { return fubini::cli::run(argc, argv, std::cout, std::cerr); }
