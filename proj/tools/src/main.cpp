#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return cmcert::cli::run(argc, argv, std::cout, std::cerr); }
