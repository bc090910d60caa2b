#include <iostream>

#include "roughiso/cli.hpp"

int main(int argc, char** argv) { return roughiso::run_cli(argc, argv, std::cout, std::cerr); }
