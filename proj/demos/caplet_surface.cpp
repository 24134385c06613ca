// Prints a small caplet price surface (expiry x cap level) as CSV, using the
// closed-form approximation on a flat initial curve. Pipe into a plotting
// tool of your choice.

#include <cstdio>

#include "longbond/longbond.hpp"

namespace lb = longbond;

int main() {
    const auto params = lb::make_model(0.2, lb::InitialCurve::flat(0.05, 10.0));
    const lb::PathState p0{lb::TimeGrid(10.0, 1), {0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}};

    std::printf("expiry,cap,price\n");
    for (double T = 0.5; T <= 4.0 + 1e-9; T += 0.5) {
        for (double cap = 0.01; cap <= 0.10 + 1e-9; cap += 0.01) {
            const lb::CapletSpec spec{T, T + 0.25, cap};
            std::printf("%.2f,%.2f,%.10f\n", T, cap,
                        lb::caplet_price_approx(params, p0, 0.0, spec));
        }
    }
    return 0;
}
