#include <iostream>

#include "sbsim/cli.hpp"

int main(int argc, char** argv) { return sbsim::cli::main_entry(argc, argv, std::cout, std::cerr); }
