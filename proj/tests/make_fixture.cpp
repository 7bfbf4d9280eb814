// Writes the finite-difference reference eigenvalues used by the CLI test.

#include <cmath>
#include <cstdio>

#include "oracles.hpp"
#include "slgl/io.hpp"

int main() {
    const auto fd = oracle::fd_spectrum([](double x) { return std::cos(2 * x); }, 0.0, 0.0, 8, 4000);
    slgl::Json doc = slgl::Json::object();
    doc["N"] = fd.mu.size();
    doc["mu"] = fd.mu;
    doc["method"] = "second-order finite differences with ghost-node Neumann ends, 4000 and 8000 intervals, "
                    "Richardson-extrapolated";
    std::fputs(slgl::dump_json(doc).c_str(), stdout);
}
