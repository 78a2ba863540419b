#include <iostream>

#include "helios/cli.hpp"

int main(int argc, char** argv) { return helios::run_cli(argc, argv, std::cout, std::cerr); }
