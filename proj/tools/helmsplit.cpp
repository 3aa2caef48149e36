#include <iostream>

#include "helmsplit/cli.hpp"

int main(int argc, char** argv) { return helmsplit::cli::run(argc, argv, std::cout, std::cerr); }
