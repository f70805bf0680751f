#include <iostream>

#include "ccx/cli.hpp"

int main(int argc, char** argv) {
    return ccx::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
