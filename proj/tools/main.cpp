// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include <iostream>

#include "pnpchain/cli.hpp"

int main(int argc, char** argv) { return pnpchain::cli::run_cli(argc, argv, std::cout, std::cerr); }
