#include "scenrisk/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return scenrisk::cli::main_entry(argc, argv, std::cout, std::cerr); }
