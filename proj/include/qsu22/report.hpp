#pragma once

#include <string>
#include <vector>

namespace qsu22 {

// One named numerical check: residuals against a tolerance.
struct VerificationReport {
    std::string name;
    std::string point;       // serialized parameter point, for replay
    double residual_max = 0.0;
    double residual_fro = 0.0;
    double tolerance = 0.0;
    bool passed = false;

    static VerificationReport make(std::string name, std::string point,
                                   double rmax, double rfro, double tol) {
        VerificationReport r;
        r.name = std::move(name);
        r.point = std::move(point);
        r.residual_max = rmax;
        r.residual_fro = rfro;
        r.tolerance = tol;
        r.passed = rmax <= tol;
        return r;
    }
};

}  // namespace qsu22
