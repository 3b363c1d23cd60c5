#include <iostream>

#include "delaystab_cli/commands.hpp"

int main(int argc, char** argv) { return delaystab::cli::run(argc, argv, std::cout, std::cerr); }
