#include <iostream>

#include "ontodex_cli.hpp"

int main(int argc, char** argv) { return ontodex::cli::run(argc, argv, std::cout, std::cerr); }
