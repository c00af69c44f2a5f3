#include "jensen_sharp/cli.hpp"

int main(int argc, char** argv) { return jsharp::cli::main(argc, argv); }
