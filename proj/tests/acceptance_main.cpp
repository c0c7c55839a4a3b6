#include <cstdlib>
#include <iostream>

#include "bosegas/verify.hpp"

int main(int argc, char** argv) {
    int which = 0;
    if (argc > 1) which = std::atoi(argv[1]);
    auto results = bosegas::run_acceptance(which);
    const bool ok = bosegas::print_results(std::cout, results);
    return ok ? 0 : 1;
}
