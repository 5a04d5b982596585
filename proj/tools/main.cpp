#include <iostream>

#include "parisian/cli.hpp"

int main(int argc, char** argv) { return parisian::cli::main_entry(argc, argv, std::cout, std::cerr); }
