#include <iostream>

#include "blackout/cli.hpp"

int main(int argc, char** argv) { return blackout::cli::run(argc, argv, std::cout, std::cerr); }
