#pragma once

namespace bosegas {

// Radial C^2 cutoff profile: chi(s) = 1 for s <= 1/2, chi(s) = 0 for s >= 1,
// quintic smoothstep in between (chi' = chi'' = 0 at both joins). The moment
// identity int_0^1 chi''(s) s ds = 1 pins the normalization of the
// renormalized potential.
struct CutoffProfile {
    double value(double s) const;
    double d1(double s) const;
    double d2(double s) const;

    // int_0^1 chi''(s) s ds, by quadrature (exact up to roundoff for the
    // polynomial pieces); equals 1 for any profile with chi(1/2)=1, chi(1)=0,
    // chi'(1)=0.
    double moment_identity() const;
};

}  // namespace bosegas
