#include <iostream>

#include "lcpoly/cli.hpp"

int main(int argc, char** argv) { return lcpoly::cli::main_entry(argc, argv, std::cout, std::cerr); }
