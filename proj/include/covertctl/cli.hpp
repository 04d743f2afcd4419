// Command-line front end. Exit codes: 0 success, 1 domain error (the
// violated precondition is printed to the error stream), 2 I/O error.
#pragma once

#include <iosfwd>

namespace covertctl::cli {

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace covertctl::cli
