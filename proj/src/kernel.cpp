#include "gsmooth/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "gsmooth/numeric.hpp"

namespace gsmooth {
namespace {

constexpr double kTwoPi = 6.2831853071795864769252867665590;

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double q = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        q += d * d;
    }
    return q;
}

}  // namespace

GaussianKernel::GaussianKernel(double sigma, int dimension)
    : sigma(sigma), dimension(dimension) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("kernel sigma must be positive");
    if (dimension < 1) throw std::invalid_argument("kernel dimension must be positive");
}

double kernel_eval(const GaussianKernel& k, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(k.dimension))
        throw std::invalid_argument("dimension mismatch: kernel argument length");
    double q = 0.0;
    for (double v : x) q += v * v;
    const double norm = ipow(std::sqrt(kTwoPi) * k.sigma, k.dimension);
    return std::exp(-q / (2.0 * k.sigma * k.sigma)) / norm;
}

ScaledGaussian::ScaledGaussian(double prefactor, std::vector<double> mean, double variance)
    : prefactor(prefactor), mean(std::move(mean)), variance(variance) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("variance must be positive");
    if (this->mean.empty()) throw std::invalid_argument("mean must be nonempty");
}

ScaledGaussian scaled_from_stddev(double prefactor, std::vector<double> mean, double sigma) {
    return ScaledGaussian(prefactor, std::move(mean), sigma * sigma);
}

double scaled_eval(const ScaledGaussian& g, std::span<const double> x) {
    if (x.size() != g.mean.size())
        throw std::invalid_argument("dimension mismatch: gaussian argument length");
    const double norm = ipow(std::sqrt(kTwoPi * g.variance), g.dimension());
    return g.prefactor * std::exp(-squared_distance(x, g.mean) / (2.0 * g.variance)) / norm;
}

ScaledGaussian gaussian_product(const ScaledGaussian& a, const ScaledGaussian& b) {
    if (a.mean.size() != b.mean.size())
        throw std::invalid_argument("dimension mismatch: gaussian product operands");
    const int m = a.dimension();
    const double vsum = a.variance + b.variance;
    std::vector<double> mean(a.mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i)
        mean[i] = (b.variance * a.mean[i] + a.variance * b.mean[i]) / vsum;
    const double variance = a.variance * b.variance / vsum;
    const double scale =
        std::exp(-squared_distance(a.mean, b.mean) / (2.0 * vsum)) / ipow(std::sqrt(kTwoPi * vsum), m);
    return ScaledGaussian(a.prefactor * b.prefactor * scale, std::move(mean), variance);
}

double affine_kernel_convolve(double delta, double a, double b, double sigma) {
    (void)b;  // the offset shifts the argument of the result, not its scale
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be positive");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be positive");
    if (!std::isfinite(a)) throw std::invalid_argument("nonfinite scale");
    return std::sqrt(delta * delta + a * a * sigma * sigma);
}

}  // namespace gsmooth
