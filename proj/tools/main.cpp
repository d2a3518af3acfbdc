#include "cli.hpp"

int main(int argc, char** argv) { return potsynth::cli::run(argc, argv); }
