#include "miqcqp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return miqcqp::run_cli(argc, argv, std::cout, std::cerr); }
