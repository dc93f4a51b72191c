#include "mbdeform/cli.hpp"

int main(int argc, char** argv) { return mbdeform::cli(argc, argv); }
