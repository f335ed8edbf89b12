#include "weyl/oracles.hpp"

#include <cmath>
#include <vector>

#include "weyl/hermite.hpp"

namespace weyl::oracle {

namespace {

using Complex = std::complex<double>;

double phi(int n, double y) { return hermite_eval(n, y); }

double phi_derivative(int n, double y) {
    const double h = 1e-3;
    // five-point stencil, O(h^4)
    return (-phi(n, y + 2 * h) + 8 * phi(n, y + h) - 8 * phi(n, y - h) + phi(n, y - 2 * h)) /
           (12 * h);
}

double smooth_taper(double r, double a) {
    if (r <= a) return 1.0;
    if (r >= 1.0) return 0.0;
    double s = std::cos(0.5 * M_PI * (r - a) / (1.0 - a));
    return s * s;
}

}  // namespace

double ladder_q_entry(int m, int n) {
    GaussHermiteRule rule = gauss_hermite(std::max(64, m + n + 8));
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double y = rule.nodes[i];
        acc += rule.weights[i] * phi(m, y) * y * phi(n, y);
    }
    return acc;
}

Complex ladder_p_entry(int m, int n) {
    GaussHermiteRule rule = gauss_hermite(std::max(96, 2 * (m + n) + 16));
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double y = rule.nodes[i];
        acc += rule.weights[i] * phi(m, y) * phi_derivative(n, y);
    }
    return Complex(0.0, -1.0) * acc;
}

Complex kernel_matrix_element(const SymbolExpr& f, int m, int n, double box, int xy_points,
                              double xi_box, int xi_points) {
    if (f.dof() != 1) throw DimensionMismatch("oracle kernel element supports d = 1");
    if (xi_box <= 0.0) xi_box = box;
    const double hx = 2.0 * box / xy_points;
    const double hxi = 2.0 * xi_box / xi_points;

    std::vector<double> phim(static_cast<size_t>(xy_points) + 1);
    std::vector<double> phin(static_cast<size_t>(xy_points) + 1);
    for (int i = 0; i <= xy_points; ++i) {
        double t = -box + hx * i;
        phim[static_cast<size_t>(i)] = phi(m, t);
        phin[static_cast<size_t>(i)] = phi(n, t);
    }

    // tabulate the tapered symbol over the midpoint grid s = (x+y)/2 (spacing
    // hx/2) and the oscillation factors over the offset grid u = x - y
    const int ns = 2 * xy_points + 1;
    std::vector<Complex> fv(static_cast<size_t>(ns) * xi_points);
    PhasePoint z = PhasePoint::zero(1);
    for (int si = 0; si < ns; ++si) {
        z.coords[0] = -box + 0.5 * hx * si;
        for (int k = 0; k < xi_points; ++k) {
            double xi = -xi_box + hxi * k;
            z.coords[1] = xi;
            double w = smooth_taper(std::abs(xi) / xi_box, 0.75);
            fv[static_cast<size_t>(si) * xi_points + k] = w == 0.0 ? Complex(0.0) : w * f.evaluate(z);
        }
    }
    std::vector<Complex> osc(static_cast<size_t>(ns) * xi_points);
    for (int ui = 0; ui < ns; ++ui) {
        double u = -2.0 * box + hx * ui;
        for (int k = 0; k < xi_points; ++k) {
            double xi = -xi_box + hxi * k;
            osc[static_cast<size_t>(ui) * xi_points + k] = Complex(std::cos(u * xi), std::sin(u * xi));
        }
    }

    Complex acc(0.0);
    for (int ix = 0; ix <= xy_points; ++ix) {
        if (std::abs(phim[static_cast<size_t>(ix)]) < 1e-14) continue;
        for (int iy = 0; iy <= xy_points; ++iy) {
            if (std::abs(phin[static_cast<size_t>(iy)]) < 1e-14) continue;
            const Complex* frow = &fv[static_cast<size_t>(ix + iy) * xi_points];
            const Complex* orow = &osc[static_cast<size_t>(xy_points + ix - iy) * xi_points];
            Complex kval(0.0);
            for (int k = 0; k < xi_points; ++k) kval += frow[k] * orow[k];
            acc += phim[static_cast<size_t>(ix)] * phin[static_cast<size_t>(iy)] * kval;
        }
    }
    return acc * hx * hx * hxi / (2.0 * M_PI);
}

double weyl_vacuum_overlap(double x, double xi, int points, double box) {
    // W_z phi(y) = e^{-i y xi + i x xi / 2} phi(y - x) up to the convention's
    // reflection in x; the vacuum overlap magnitude is insensitive to it
    const double h = 2.0 * box / points;
    Complex acc(0.0);
    for (int i = 0; i <= points; ++i) {
        double y = -box + h * i;
        double a = phi(0, y);
        double b = phi(0, y - x);
        double ph = -y * xi + 0.5 * x * xi;
        acc += a * b * Complex(std::cos(ph), std::sin(ph));
    }
    return std::abs(acc * h);
}

double coherent_overlap(const PhasePoint& z, const PhasePoint& w, int points, double box) {
    if (z.dof() != 1 || w.dof() != 1) throw DimensionMismatch("oracle overlap supports d = 1");
    const double h = 2.0 * box / points;
    auto state = [&](const PhasePoint& c, double y) -> Complex {
        double ph = -y * c.coords[1] + 0.5 * c.coords[0] * c.coords[1];
        return Complex(std::cos(ph), std::sin(ph)) * phi(0, y - c.coords[0]);
    };
    Complex acc(0.0);
    for (int i = 0; i <= points; ++i) {
        double y = -box + h * i;
        acc += std::conj(state(z, y)) * state(w, y);
    }
    return std::abs(acc * h);
}

double harmonic_toeplitz_diagonal(int n, int points, double rmax) {
    // <e_n, T e_n> = 2 int r (r^2) e^{-r^2} r^{2n}/n! dr
    const double h = rmax / points;
    double acc = 0.0;
    for (int i = 1; i <= points; ++i) {
        double r = h * i;
        double lg = (2.0 * n + 3.0) * std::log(r) - r * r - std::lgamma(n + 1.0);
        acc += std::exp(lg);
    }
    return 2.0 * acc * h;
}

double heat_of_x2(double x, int points, double box) {
    const double h = 2.0 * box / points;
    double acc = 0.0;
    for (int i = 0; i <= points; ++i) {
        double u = -box + h * i;
        acc += (x - u) * (x - u) * std::exp(-u * u) / std::sqrt(M_PI);
    }
    return acc * h;
}

}  // namespace weyl::oracle
