#include <iostream>

#include "garland/cli.hpp"

int main(int argc, char** argv) {
    return garland::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
