#include <iostream>

#include "covertctl/cli.hpp"

int main(int argc, char **argv) {
    return covertctl::cli::run(argc, argv, std::cout, std::cerr);
}
