#include "weylap/cli.hpp"

int main(int argc, char** argv) { return weylap::cli::run(argc, argv); }
