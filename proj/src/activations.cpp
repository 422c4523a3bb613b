#include "gsmooth/activations.hpp"

#include <cmath>
#include <stdexcept>

namespace gsmooth {
namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215;

double sign_raw(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0); }
double sign_raw_slope(double) { return 0.0; }
double sign_raw_curv(double) { return 0.0; }

double sign_smoothed(double y, double s) { return std::erf(y / (kSqrt2 * s)); }
double sign_smoothed_slope(double y, double s) {
    // d/dy erf(y/(sqrt(2) s)) with erf'(u) = (2/sqrt(pi)) exp(-u^2)
    return kTwoOverSqrtPi / (kSqrt2 * s) * std::exp(-y * y / (2.0 * s * s));
}
double sign_smoothed_curv(double y, double s) {
    return sign_smoothed_slope(y, s) * (-y / (s * s));
}

double relu_raw(double y) { return y > 0.0 ? y : 0.0; }
double relu_raw_slope(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? 0.0 : 0.5); }
double relu_raw_curv(double) { return 0.0; }

double relu_smoothed(double y, double s) {
    return s * kInvSqrt2Pi * std::exp(-y * y / (2.0 * s * s)) +
           0.5 * y * (1.0 + std::erf(y / (kSqrt2 * s)));
}
double relu_smoothed_slope(double y, double s) {
    // The Gaussian terms cancel; what is left is the normal CDF of y/s.
    return 0.5 * (1.0 + std::erf(y / (kSqrt2 * s)));
}
double relu_smoothed_curv(double y, double s) {
    return kInvSqrt2Pi / s * std::exp(-y * y / (2.0 * s * s));
}

double sin_raw(double y) { return std::sin(y); }
double sin_raw_slope(double y) { return std::cos(y); }
double sin_raw_curv(double y) { return -std::sin(y); }

double sin_smoothed(double y, double s) { return std::exp(-0.5 * s * s) * std::sin(y); }
double sin_smoothed_slope(double y, double s) { return std::exp(-0.5 * s * s) * std::cos(y); }
double sin_smoothed_curv(double y, double s) { return -std::exp(-0.5 * s * s) * std::sin(y); }

constexpr ActivationForms kRegistry[] = {
    {"sign", sign_raw, sign_raw_slope, sign_raw_curv,
     sign_smoothed, sign_smoothed_slope, sign_smoothed_curv},
    {"relu", relu_raw, relu_raw_slope, relu_raw_curv,
     relu_smoothed, relu_smoothed_slope, relu_smoothed_curv},
    {"sin", sin_raw, sin_raw_slope, sin_raw_curv,
     sin_smoothed, sin_smoothed_slope, sin_smoothed_curv},
};

}  // namespace

const ActivationForms& activation_forms(Activation a) {
    const int i = static_cast<int>(a);
    if (i < 0 || i >= 3) throw std::invalid_argument("unknown activation");
    return kRegistry[i];
}

const char* activation_name(Activation a) { return activation_forms(a).name; }

double activation_value(Activation a, double y, double s) {
    const ActivationForms& f = activation_forms(a);
    return s == 0.0 ? f.raw(y) : f.smoothed(y, s);
}

double activation_slope(Activation a, double y, double s) {
    const ActivationForms& f = activation_forms(a);
    return s == 0.0 ? f.raw_slope(y) : f.smoothed_slope(y, s);
}

double activation_curvature(Activation a, double y, double s) {
    const ActivationForms& f = activation_forms(a);
    return s == 0.0 ? f.raw_curvature(y) : f.smoothed_curvature(y, s);
}

}  // namespace gsmooth
