#pragma once
#include <cmath>
#include <optional>

#include "loopmc/errors.hpp"

namespace loopmc {

// Parameters of the loop measure theta^{|L(w)|} d rho_u(w) on [0,beta) per edge.
// When the model mirrors a quantum spin system, theta = 2S+1 with S half-integer.
struct ModelParams {
    double beta = 1.0;
    double u = 1.0;
    double theta = 2.0;
    std::optional<double> spin;  // S, present only when theta == 2S+1 exactly

    void validate() const {
        if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
        if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("u must lie in [0,1]");
        if (!(theta > 0.0)) throw ValidationError("theta must be > 0");
        if (spin) {
            const double s = *spin;
            if (!(s > 0.0) || std::rint(2.0 * s) != 2.0 * s)
                throw ValidationError("S must be a positive half-integer");
            if (theta != 2.0 * s + 1.0)
                throw ValidationError("theta != 2S+1");
        }
    }

    static ModelParams with_spin(double beta, double u, double s) {
        ModelParams p;
        p.beta = beta;
        p.u = u;
        p.spin = s;
        p.theta = 2.0 * s + 1.0;
        p.validate();
        return p;
    }

    static ModelParams with_theta(double beta, double u, double theta) {
        ModelParams p;
        p.beta = beta;
        p.u = u;
        p.theta = theta;
        p.validate();
        return p;
    }
};

}  // namespace loopmc
