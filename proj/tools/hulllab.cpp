#include "hulllab/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return hulllab::cli::run_cli(argc, argv, std::cout, std::cerr); }
