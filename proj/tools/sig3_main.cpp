#include <iostream>

#include <sig3/cli.hpp>

int main(int argc, char **argv)
{
    return sig3::cli::run(argc, argv, std::cout, std::cerr);
}
