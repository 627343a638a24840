#include <iostream>
#include "bouss/acceptance.hpp"
int main() {
    auto results = bouss::acceptance::run_all(&std::cout);
    return bouss::acceptance::all_passed(results) ? 0 : 1;
}
