#pragma once

namespace gsmooth {

enum class Activation { Sign, Relu, Sin };

const char* activation_name(Activation a);

// Closed-form Gaussian convolution of a scalar activation, together with its
// derivatives in the argument. Each registry entry carries the raw function
// (used when the effective smoothing scale is zero) and the smoothed family:
//
//   sign: erf(y / (sqrt(2) s))
//   relu: (s / sqrt(2 pi)) exp(-y^2 / (2 s^2)) + y/2 (1 + erf(y / (sqrt(2) s)))
//   sin : exp(-s^2 / 2) sin(y)
//
// New activations are added here, next to an oracle test, not via callbacks.
struct ActivationForms {
    const char* name;
    double (*raw)(double y);
    double (*raw_slope)(double y);
    double (*raw_curvature)(double y);
    double (*smoothed)(double y, double s);        // s > 0
    double (*smoothed_slope)(double y, double s);  // d/dy
    double (*smoothed_curvature)(double y, double s);
};

const ActivationForms& activation_forms(Activation a);

// Dispatch helpers: s == 0 falls back to the raw function.
double activation_value(Activation a, double y, double s);
double activation_slope(Activation a, double y, double s);
double activation_curvature(Activation a, double y, double s);

}  // namespace gsmooth
