// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "runner.hpp"

int main(int argc, char** argv) { return qmvlab::main_entry(argc, argv, std::cout, std::cerr); }
