#include <iostream>

#include "cli.hpp"

// SP_SEED is reserved: the engine is deterministic and reads no seed.
int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sp::cli::run(args, std::cout, std::cerr);
}
