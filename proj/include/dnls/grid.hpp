#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dnls {

using cplx = std::complex<double>;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Periodic box [-L/2, L/2) with n points. Frequencies are stored in FFT order
// (0, 1, ..., n/2-1, -n/2, ..., -1) times 2*pi/L.
class Grid {
public:
    Grid() = default;
    Grid(int n, double length);

    int n() const { return d_->n; }
    double length() const { return d_->length; }
    double dx() const { return d_->length / d_->n; }
    double dxi() const { return 2.0 * kPi / d_->length; }
    double xi_max() const { return kPi / dx(); }
    const RArray& x() const { return d_->x; }
    const RArray& xi() const { return d_->xi; }
    // signed mode number of FFT slot k
    int mode(int k) const { return k < d_->n / 2 ? k : k - d_->n; }
    int nyquist() const { return d_->n / 2; }
    bool valid() const { return static_cast<bool>(d_); }

    bool same_as(const Grid& o) const;

private:
    struct Data {
        int n = 0;
        double length = 0.0;
        RArray x, xi;
    };
    std::shared_ptr<const Data> d_;
};

Grid make_grid(int n, double length);

struct Field {
    Grid grid;
    CArray v;

    Field() = default;
    Field(Grid g) : grid(std::move(g)), v(CArray::Zero(grid.n())) {}
    Field(Grid g, CArray values);

    int size() const { return static_cast<int>(v.size()); }
    Field conj() const { return Field(grid, v.conjugate()); }
    RArray abs2() const { return v.abs2(); }
};

Field zeros_like(const Field& f);
Field sample(const Grid& g, const std::function<cplx(double)>& fn);

// f^(xi) = integral f(x) exp(-i xi x) dx, trapezoid on the box (carries dx).
CArray fft(const Field& f);
// inverse of fft (carries 1/L)
Field ifft(const Grid& g, const CArray& spectrum);

struct MultiplierSpec {
    std::function<cplx(double)> symbol;
    std::string name;
};

CArray symbol_array(const Grid& g, const MultiplierSpec& m);
Field apply_multiplier(const MultiplierSpec& m, const Field& f);
// fast path with a precomputed symbol in FFT order
Field apply_symbol(const CArray& symbol, const Field& f);

// common symbols; the Nyquist slot of every derivative symbol is zeroed
CArray deriv_symbol(const Grid& g, int order = 1);
CArray resolvent_symbol(const Grid& g, cplx a, int sign);  // 1/(a + sign*i*xi)

Field deriv(const Field& f, int order = 1);
// F(x) = integral_{-L/2}^{x} f, spectral (mean part integrated exactly)
Field antiderivative(const Field& f);
// band-limited translation: returns f(x - y)
Field translate(const Field& f, double y);
// band-limited evaluation at arbitrary points (O(n*m))
CArray evaluate_at(const Field& f, const RArray& points);

// band-limited resampling onto n points of the same box; modes that do not fit
// and both Nyquist slots are dropped
Field resample(const Field& f, int n);

// |q|^2 q with a zero-padded (factor 2) product, exact for band-limited cubes
Field cubic_dealiased(const Field& q);

double phi_cutoff(double xi);
std::vector<double> lp_dyadics(const Grid& g);
Field littlewood_paley(const Field& f, double N);
// the block below the lowest resolvable dyadic: phi(2 xi / N0)
Field lp_low(const Field& f, double N0);

// norms use d xi/(2 pi), so sobolev_norm(f, 0, k) equals the L2 norm
double sobolev_norm(const Field& f, double s, double kappa = 1.0);
double l2_norm(const Field& f);
cplx integral(const Field& f);
cplx integral(const Grid& g, const CArray& values);

// max |f| over the outer `frac` of the box on each side, relative to max |f|
double boundary_tail(const Field& f, double frac = 1.0 / 64.0);
void require_boundary_decay(const Field& f, double tol, const std::string& what);

}  // namespace dnls
