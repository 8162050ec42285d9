#include <iostream>

#include "cohprop/cli.hpp"

int main(int argc, char** argv) { return cohprop::cli::main_entry(argc, argv, std::cout, std::cerr); }
