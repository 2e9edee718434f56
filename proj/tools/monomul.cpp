#include <iostream>

#include "monomul/cli.hpp"

int main(int argc, char** argv) {
    return monomul::cli::run(argc, argv, std::cout, std::cerr);
}
