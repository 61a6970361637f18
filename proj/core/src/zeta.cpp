#include "zetalab/zeta.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include "zetalab/errors.hpp"
#include "zetalab/numutil.hpp"
#include "zetalab/quadrature.hpp"

namespace zetalab {

namespace {

#include "rs_coefficients.inc"

constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kTwoPiL = 2.0L * kPiL;

template <std::size_t N>
long double horner(const double (&c)[N], long double z) {
    long double acc = 0.0L;
    for (std::size_t i = N; i-- > 0;) acc = acc * z + c[i];
    return acc;
}

// log n and n^{-1/2} for the Riemann-Siegel main sum; N <= sqrt(1e8 / 2 pi) < 4000.
struct MainSumTable {
    static constexpr std::size_t kSize = 4000;
    std::array<long double, kSize + 1> log_n{};
    std::array<long double, kSize + 1> inv_sqrt_n{};
    MainSumTable() {
        for (std::size_t n = 1; n <= kSize; ++n) {
            log_n[n] = std::log(static_cast<long double>(n));
            inv_sqrt_n[n] = 1.0L / std::sqrt(static_cast<long double>(n));
        }
    }
};

const MainSumTable& main_sum_table() {
    static const MainSumTable table;
    return table;
}

long double theta_stirling(long double t) {
    const long double t2 = t * t;
    return t / 2 * std::log(t / kTwoPiL) - t / 2 - kPiL / 8 + 1.0L / (48 * t) +
           7.0L / (5760 * t * t2) + 31.0L / (80640 * t * t2 * t2);
}

// Bernoulli numbers B_2, B_4, ..., B_30.
constexpr double kBernoulli[] = {1.0 / 6,
                                 -1.0 / 30,
                                 1.0 / 42,
                                 -1.0 / 30,
                                 5.0 / 66,
                                 -691.0 / 2730,
                                 7.0 / 6,
                                 -3617.0 / 510,
                                 43867.0 / 798,
                                 -174611.0 / 330,
                                 854513.0 / 138,
                                 -236364091.0 / 2730,
                                 8553103.0 / 6,
                                 -23749461029.0 / 870,
                                 8615841276005.0 / 14322};
constexpr int kEulerMaclaurinTerms = 15;

// log sin(w), stable for large |Im w|.
std::complex<double> log_sin(std::complex<double> w) {
    const double y = w.imag();
    if (std::fabs(y) < 20.0) return std::log(std::sin(w));
    if (y < 0.0) return std::conj(log_sin(std::conj(w)));
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}), |e^{2iw}| = e^{-2y}
    const std::complex<double> i(0.0, 1.0);
    return -i * w + std::log(0.5 * i) + std::log1p(-std::exp(-2.0 * y));
}

}  // namespace

double rs_theta(double t) {
    if (t >= 50.0) return static_cast<double>(theta_stirling(t));
    // theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi
    return log_gamma({0.25, 0.5 * t}).imag() - 0.5 * t * std::log(kPi);
}

double riemann_siegel_z(double t) {
    if (!(t >= kTwoPi)) throw DomainError("riemann_siegel_z: requires t >= 2 pi");
    if (t > kMaxHeight) throw PrecisionError("riemann_siegel_z: t above 1e8");
    const auto& tab = main_sum_table();
    const long double tl = t;
    const long double a = std::sqrt(tl / kTwoPiL);
    const auto N = static_cast<std::size_t>(a);
    const long double z = (a - static_cast<long double>(N)) - 0.5L;
    const long double th = t >= 50.0 ? theta_stirling(tl) : static_cast<long double>(rs_theta(t));

    // Phases reach ~1e9 at the top of the window: form and reduce them in long
    // double, then take the cosine in double.
    long double sum = 0.0L;
    for (std::size_t n = 1; n <= N; ++n) {
        long double ph = th - tl * tab.log_n[n];
        ph -= kTwoPiL * std::nearbyint(ph / kTwoPiL);
        sum += tab.inv_sqrt_n[n] * std::cos(static_cast<double>(ph));
    }

    const long double ainv = 1.0L / a;
    long double corr = horner(kC7, z);
    corr = horner(kC6, z) + ainv * corr;
    corr = horner(kC5, z) + ainv * corr;
    corr = horner(kC4, z) + ainv * corr;
    corr = horner(kC3, z) + ainv * corr;
    corr = horner(kC2, z) + ainv * corr;
    corr = horner(kC1, z) + ainv * corr;
    corr = horner(kC0, z) + ainv * corr;
    const long double sign = (N - 1) % 2 == 0 ? 1.0L : -1.0L;
    return static_cast<double>(2.0L * sum + sign * std::sqrt(ainv) * corr);
}

std::complex<double> zeta_euler_maclaurin(std::complex<double> s, std::size_t terms) {
    using cld = std::complex<long double>;
    if (s == std::complex<double>(1.0, 0.0)) throw DomainError("zeta: pole at s = 1");
    std::size_t N = terms;
    if (N == 0) {
        // |s + 2m| / (2 pi N) <= 1/4 keeps the correction series far below double precision.
        const double reach = std::abs(s) + 2.0 * kEulerMaclaurinTerms;
        N = std::max<std::size_t>(25, static_cast<std::size_t>(std::ceil(reach * 2.0 / kPi)));
    }
    const cld sl(s.real(), s.imag());
    long double re = 0.0L, im = 0.0L;
    for (std::size_t n = 1; n < N; ++n) {
        const long double ln = std::log(static_cast<long double>(n));
        const long double mag = std::exp(-sl.real() * ln);
        const long double ph = -sl.imag() * ln;
        re += mag * std::cos(ph);
        im += mag * std::sin(ph);
    }
    const long double Nl = static_cast<long double>(N);
    const long double lnN = std::log(Nl);
    const cld N_pow_neg_s = std::exp(-sl * lnN);
    cld acc(re, im);
    acc += N_pow_neg_s * Nl / (sl - 1.0L);
    acc += 0.5L * N_pow_neg_s;
    // term_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}
    cld rising = sl * N_pow_neg_s / Nl;  // s N^{-s-1}
    long double factorial = 2.0L;        // (2k)!
    for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
        acc += static_cast<long double>(kBernoulli[k - 1]) / factorial * rising;
        const long double j = 2.0L * k;
        rising *= (sl + (j - 1.0L)) * (sl + j) / (Nl * Nl);
        factorial *= (j + 1.0L) * (j + 2.0L);
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double zeta_abs2_euler_maclaurin(double t, std::size_t terms) {
    return std::norm(zeta_euler_maclaurin({0.5, t}, terms));
}

double zeta_abs2_critical(double t) {
    if (!(t >= 0.0)) throw DomainError("zeta_abs2_critical: requires t >= 0");
    if (t > kMaxHeight) throw PrecisionError("zeta_abs2_critical: t above 1e8");
    if (t < kRiemannSiegelMinHeight) return zeta_abs2_euler_maclaurin(t);
    const double z = riemann_siegel_z(t);
    return z * z;
}

CriticalPoint critical_point(double t) {
    CriticalPoint p{};
    p.t = t;
    p.theta = rs_theta(t);
    if (t >= kRiemannSiegelMinHeight) {
        p.z_value = riemann_siegel_z(t);
    } else {
        const auto zeta = zeta_euler_maclaurin({0.5, t});
        p.z_value = (std::polar(1.0, p.theta) * zeta).real();
    }
    p.zeta_abs2 = p.z_value * p.z_value;
    return p;
}

std::complex<double> log_gamma(std::complex<double> z) {
    static constexpr double kG = 7.0;
    static constexpr double kLanczos[] = {0.99999999999980993,  676.5203681218851,
                                          -1259.1392167224028,  771.32342877765313,
                                          -176.61502916214059,  12.507343278686905,
                                          -0.13857109526572012, 9.9843695780195716e-6,
                                          1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        return std::log(kPi) - log_sin(kPi * z) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + kG + 0.5;
    return 0.5 * std::log(kTwoPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

std::complex<double> chi_critical(double t) {
    const std::complex<double> s(0.5, t);
    const std::complex<double> log_chi = s * std::log(2.0) + (s - 1.0) * std::log(kPi) +
                                         log_sin(0.5 * kPi * s) + log_gamma(1.0 - s);
    return std::exp(log_chi);
}

double chi_modulus_check(double t) {
    if (!(t >= 0.0)) throw DomainError("chi_modulus_check: requires t >= 0");
    if (t > 1e4) throw PrecisionError("chi_modulus_check: t above 1e4");
    const std::complex<double> s(0.5, t);
    const double log_mod = (s * std::log(2.0) + (s - 1.0) * std::log(kPi) +
                            log_sin(0.5 * kPi * s) + log_gamma(1.0 - s))
                               .real();
    return std::exp(log_mod);
}

double oscillation_scale(double t) {
    const double l = std::log(t / kTwoPi);
    if (!(l > kPi)) return 2.0;
    return kTwoPi / l;
}

namespace {

std::vector<double> mean_square_breaks(double a, double b) {
    auto breaks = scaled_breaks(a, b, [](double t) { return oscillation_scale(t); });
    // The evaluator changes method at kRiemannSiegelMinHeight; keep that point a panel edge.
    if (a < kRiemannSiegelMinHeight && b > kRiemannSiegelMinHeight) {
        breaks.push_back(kRiemannSiegelMinHeight);
        std::sort(breaks.begin(), breaks.end());
    }
    return breaks;
}

void check_mean_square_range(const char* who, double a, double b, double rel_tol) {
    if (!(a >= 0.0) || !(b >= a) || b > 1e6)
        throw DomainError(std::string(who) + ": requires 0 <= a <= b <= 1e6");
    if (!(rel_tol >= 1e-13)) throw DomainError(std::string(who) + ": rel_tol below 1e-13");
}

}  // namespace

MeanSquareResult integrate_mean_square(double a, double b, double rel_tol) {
    check_mean_square_range("integrate_mean_square", a, b, rel_tol);
    if (a == b) return {0.0, 0.0, 0};
    const auto breaks = mean_square_breaks(a, b);
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    const auto r = integrate_breaks([](double t) { return zeta_abs2_critical(t); },
                                    std::span<const double>(breaks), opt);
    return {r.value, r.error, r.evaluations};
}

MeanSquareResult integrate_weighted_mean_square(const std::function<double(double)>& w, double a,
                                                double b, double rel_tol) {
    check_mean_square_range("integrate_weighted_mean_square", a, b, rel_tol);
    if (a == b) return {0.0, 0.0, 0};
    const auto breaks = mean_square_breaks(a, b);
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    const auto r = integrate_breaks([&](double t) { return w(t) * zeta_abs2_critical(t); },
                                    std::span<const double>(breaks), opt);
    return {r.value, r.error, r.evaluations};
}

MeanSquareResult integrate_mean_square_simpson(double a, double b, int steps_per_scale) {
    if (!(a >= 0.0) || !(b >= a) || b > 1e6)
        throw DomainError("integrate_mean_square_simpson: requires 0 <= a <= b <= 1e6");
    if (a == b) return {0.0, 0.0, 0};
    const double h = oscillation_scale(b) / steps_per_scale;
    auto n = static_cast<std::size_t>(std::ceil((b - a) / h));
    n += n % 2;
    n = std::max<std::size_t>(n, 2);
    const auto r = simpson_doubled([](double t) { return zeta_abs2_critical(t); }, a, b, n);
    return {r.value, r.difference, 3 * n + 2};
}

double mean_square_main_term(double T) { return T * (std::log(T / kTwoPi) + 2.0 * kEulerGamma - 1.0); }

namespace {

constexpr double kLowSegmentEnd = 2.0;

double low_segment(QuadratureScheme scheme) {
    auto f = [](double t) { return zeta_abs2_euler_maclaurin(t); };
    if (scheme == QuadratureScheme::Simpson) return simpson_doubled(f, 0.0, kLowSegmentEnd, 256).value;
    QuadOptions opt;
    opt.rel_tol = 1e-9;
    return integrate(f, 0.0, kLowSegmentEnd, opt).value;
}

}  // namespace

ErrorTermSample error_term(double T, QuadratureScheme scheme) {
    if (!(T >= 10.0) || T > 1e6) throw DomainError("error_term: requires 10 <= T <= 1e6");
    const auto upper = scheme == QuadratureScheme::Simpson
                           ? integrate_mean_square_simpson(kLowSegmentEnd, T)
                           : integrate_mean_square(kLowSegmentEnd, T, 1e-11);
    ErrorTermSample s{};
    s.T = T;
    s.integral = low_segment(scheme) + upper.value;
    s.main_term = mean_square_main_term(T);
    s.e_value = s.integral - s.main_term;
    s.error_estimate = upper.error_estimate;
    return s;
}

std::vector<ErrorTermSample> error_term_series(double T0, double T1, double step) {
    if (!(step > 0.0) || !(T1 >= T0)) throw DomainError("error_term_series: bad grid");
    std::vector<ErrorTermSample> out;
    ErrorTermSample cur = error_term(T0);
    out.push_back(cur);
    for (double T = T0 + step; T <= T1 + 1e-9 * step; T += step) {
        const auto piece = integrate_mean_square(cur.T, T, 1e-11);
        cur.T = T;
        cur.integral += piece.value;
        cur.main_term = mean_square_main_term(T);
        cur.e_value = cur.integral - cur.main_term;
        cur.error_estimate += piece.error_estimate;
        out.push_back(cur);
    }
    return out;
}

}  // namespace zetalab
