#pragma once

#include <complex>
#include <vector>

#include "weyl/errors.hpp"

namespace weyl {

/// Symbol sampled on a uniform grid over [-R, R)^{2d}: node t_i = -R + i*h
/// with h = 2R/n along each axis, axes ordered (x_1..x_d, xi_1..xi_d), last
/// axis fastest. The +R endpoint is excluded (periodic-transform friendly).
struct SampledSymbol {
    int d = 1;
    double half_width = 0.0;
    int points_per_axis = 0;  // power of two
    std::vector<std::complex<double>> values;

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    double node(int i) const { return -half_width + spacing() * i; }

    std::size_t expected_size() const {
        std::size_t s = 1;
        for (int a = 0; a < 2 * d; ++a) s *= static_cast<std::size_t>(points_per_axis);
        return s;
    }

    void validate() const {
        if (d < 1) throw InvalidConfig("sampled symbol: d must be positive");
        if (half_width <= 0.0) throw InvalidConfig("sampled symbol: half-width must be positive");
        int n = points_per_axis;
        if (n < 2 || (n & (n - 1)) != 0)
            throw InvalidConfig("sampled symbol: points per axis must be a power of two");
        if (values.size() != expected_size())
            throw InvalidConfig("sampled symbol: value count does not match the grid");
    }

    std::complex<double> at2(int ix, int ixi) const {  // d = 1 accessor
        return values[static_cast<std::size_t>(ix) * points_per_axis + ixi];
    }
};

}  // namespace weyl
