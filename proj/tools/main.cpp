#include "cli.hpp"

int main(int argc, char** argv) { return nilmult::cli::run(argc, argv, std::cout, std::cerr); }
