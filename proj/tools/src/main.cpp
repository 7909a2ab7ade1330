#include <iostream>

#include "segsolve_cli/cli.hpp"

int main(int argc, char** argv) { return segsolve::cli::run(argc, argv, std::cout, std::cerr); }
