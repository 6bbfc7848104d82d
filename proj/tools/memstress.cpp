#include "memstress/cli.hpp"

int main(int argc, char** argv) { return memstress::cli::run(argc, argv); }
