#include <iostream>

#include "iacsmell/cli.hpp"

int main(int argc, char** argv) {
    return iacsmell::cli::run(argc, argv, std::cout, std::cerr);
}
