#include <iostream>

#include "msr/cli.hpp"

int main(int argc, char** argv) { return msr::run_cli(argc, argv, std::cout, std::cerr); }
