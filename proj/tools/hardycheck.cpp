#include "hardycheck/cli.hpp"

int main(int argc, char** argv) { return hardycheck::cli::run(argc, argv); }
