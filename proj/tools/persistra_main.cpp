#include "persistra/cli.hpp"

int main(int argc, char** argv) { return persistra::cli::run(argc, argv); }
