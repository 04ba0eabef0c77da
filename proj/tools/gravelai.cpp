#include <iostream>

#include "gravelai/cli.hpp"

int main(int argc, char** argv) { return gravelai::cli::run_cli(argc, argv, std::cout, std::cerr); }
