#include "taglex/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return taglex::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
