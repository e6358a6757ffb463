#include <iostream>

#include "knapsack/cli.hpp"

int main(int argc, char** argv) { return knapsack::cli::run_cli(argc, argv, std::cout, std::cerr); }
