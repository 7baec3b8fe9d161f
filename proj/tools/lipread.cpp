#include "lipread/cli.hpp"

int main(int argc, char** argv) { return lipread::dispatch(argc, argv); }
