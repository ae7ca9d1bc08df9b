#include "gfft/cli.hpp"

int main(int argc, char** argv) { return gfft::cli::run(argc, argv); }
