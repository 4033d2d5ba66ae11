#include <iostream>

#include "fivebar/cli/commands.hpp"

int main(int argc, char** argv) { return fivebar::cli::run(argc, argv, std::cout, std::cerr); }
