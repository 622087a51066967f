#include <iostream>
#include <string>
#include <vector>

#include "amplicap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return amplicap::cli::run(args, std::cout, std::cerr);
}
