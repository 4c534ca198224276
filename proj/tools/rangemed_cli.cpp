#include "rangemed/cli.hpp"

int main(int argc, char** argv) { return rangemed::cli::main(argc, argv); }
