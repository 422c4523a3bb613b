#pragma once

#include <span>
#include <vector>

namespace gsmooth {

// Isotropic Gaussian kernel with unit total mass,
// k_sigma(x) = (sqrt(2 pi) sigma)^(-n) exp(-|x|^2 / (2 sigma^2)).
struct GaussianKernel {
    double sigma = 1.0;
    int dimension = 1;
    GaussianKernel(double sigma, int dimension);
};

double kernel_eval(const GaussianKernel& k, std::span<const double> x);

// prefactor * k(x - mean; variance), variance-parameterized. Conversion from
// the standard-deviation form of GaussianKernel is explicit via
// scaled_from_stddev; the two parameterizations are never mixed implicitly.
struct ScaledGaussian {
    double prefactor = 1.0;
    std::vector<double> mean;
    double variance = 1.0;
    ScaledGaussian(double prefactor, std::vector<double> mean, double variance);
    int dimension() const { return static_cast<int>(mean.size()); }
};

ScaledGaussian scaled_from_stddev(double prefactor, std::vector<double> mean, double sigma);

double scaled_eval(const ScaledGaussian& g, std::span<const double> x);

// Product of two Gaussians is a scaled Gaussian:
//   mean     = (v2 m1 + v1 m2) / (v1 + v2)
//   variance = v1 v2 / (v1 + v2)
//   scale    = exp(-|m1 - m2|^2 / (2 (v1 + v2))) / (2 pi (v1 + v2))^(m/2)
ScaledGaussian gaussian_product(const ScaledGaussian& a, const ScaledGaussian& b);

// [k_delta(a t + b) * k_sigma](x) = k_eff(a x + b) with the returned effective
// scale sqrt(delta^2 + a^2 sigma^2).
double affine_kernel_convolve(double delta, double a, double b, double sigma);

}  // namespace gsmooth
