#include "cli.hpp"

int main(int argc, char** argv) { return restaurant::cli::run(argc, argv); }
