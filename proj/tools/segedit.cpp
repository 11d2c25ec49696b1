#include "segedit/service/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return segedit::run_cli(argc, argv, std::cout, std::cerr);
}
