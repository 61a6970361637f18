#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace zetalab {

/// 2 sqrt(2 pi) and sqrt(2 pi^3) / 6, the coefficients of D and E.
inline constexpr double kDScale = 5.0132565492620005;
inline constexpr double kEScale = 1.3124674954768683;

enum class DiagClass { Pair, SwappedPair, SquarefreeFamily, NotDiagonal };

const char* diag_class_name(DiagClass c);

/// m = alpha^2 h, n = beta^2 h, k = gamma^2 h, l = delta^2 h with alpha + beta = gamma + delta.
struct DiagonalFamilyWitness {
    std::uint64_t h, alpha, beta, gamma, delta;
};

struct DEValue {
    double D;          // 2 sqrt(2 pi) (sqrt m + sqrt n - sqrt k - sqrt l)
    double E;          // sqrt(2 pi^3)/6 (m^{3/2} + n^{3/2} - k^{3/2} - l^{3/2})
    bool exact_zero;   // sqrt m + sqrt n = sqrt k + sqrt l, decided in integers
};

/// Positive arguments up to 1e9. Differences are formed pairwise as
/// (m - k) / (sqrt m + sqrt k), so small D keeps its relative accuracy.
DEValue compute_DE(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l);

/// Integer test for sqrt m + sqrt n - sqrt k - sqrt l = 0 via squarefree cores.
bool exact_zero_D(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t l);

struct Quadruple {
    std::uint64_t m, n, k, l;
    auto operator<=>(const Quadruple&) const = default;
};

struct Classification {
    DiagClass cls;
    std::optional<DiagonalFamilyWitness> witness;  // present for SquarefreeFamily
};

/// Pair, then SwappedPair, then SquarefreeFamily. Throws ConsistencyError if
/// D = 0 exactly but no class applies.
Classification classify_diagonal(const Quadruple& q);

/// Every quadruple in (K, K']^4 with D = 0, sorted. Candidates come from sorted
/// sums sqrt m + sqrt n and are confirmed by the integer test. Requires K' <= 2K <= 400.
std::vector<Quadruple> brute_force_diagonal(std::uint64_t K, std::uint64_t K_prime);

/// Same set built from the three classes directly: pairs, swapped pairs and
/// (alpha^2 h, beta^2 h, gamma^2 h, delta^2 h) with alpha + beta = gamma + delta.
std::vector<Quadruple> enumerate_diagonal_families(std::uint64_t K, std::uint64_t K_prime);

// ---------------------------------------------------------------------------

struct EllCandidate {
    std::optional<std::uint64_t> ell;
    double remainder;     // half-width of the admissible l-interval around s^2
    bool used_fallback;   // the 1/3 margin failed and a scan was used
};

/// Half-width of the window |sqrt m + sqrt n - sqrt k - sqrt l| <= eta K^{-1/2} / (2 sqrt(2 pi)).
double d_window(std::uint64_t K, double eta);

/// The l in (K, K'] inside the window, found by rounding s^2 with
/// s = sqrt m + sqrt n - sqrt k. Throws ConsistencyError if two qualify.
EllCandidate ell_uniqueness(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t K,
                            std::uint64_t K_prime, double eta);

/// Scan of every l in (K, K'] against the same window.
std::vector<std::uint64_t> ell_scan(std::uint64_t m, std::uint64_t n, std::uint64_t k, std::uint64_t K,
                                    std::uint64_t K_prime, double eta);

/// || 2 sqrt k (sqrt m + sqrt n) - 2 sqrt(mn) ||.
double near_integer_distance(std::uint64_t m, std::uint64_t n, std::uint64_t k);

struct NearIntegerResult {
    std::uint64_t K;
    double delta;
    std::vector<std::array<std::uint64_t, 3>> samples;  // (m, n, count)
    double max_count;
    double mean_count;
    double bound;   // K delta + K^{2/3}
    double ratio;   // max_count / bound
    bool floor_identity_ok;  // count equals sum of [x + delta] - [x - delta]
};

/// Seeded (m, n) pairs in (K, 2K]; for each, the k in (K, 2K] within delta of an integer.
NearIntegerResult near_integer_count(std::uint64_t K, double delta, std::size_t samples, std::uint64_t seed);

struct WindowStats {
    std::size_t admissible;   // non-diagonal quadruples found in the window
    double max_near_ratio;           // max || . || / (|D| K^{1/2}) over them
    double max_E_scaled;      // max |E| / K^{3/2}
};

/// Random triples at scale K; admissible l from ell_uniqueness.
WindowStats d_window_scan(std::uint64_t K, double eta, std::size_t triples, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Weight with plateau [T, 2T] and support [T/2, 5T/2].
double moment_weight(double t, double T);

/// integral of phi(t) |sum_{K < k <= K'} (-1)^k d(k) k^{-1/4} e^{i(2 sqrt(2 pi k t) + c k^{3/2} t^{-1/2})}|^{2M},
/// M in {1, 2}, K' = 2K unless given. V > 0 enforces K <= T^{1.05} V^{-4}.
double moment_rhs(double T, std::uint64_t K, int M, double V = 0.0, std::uint64_t K_prime = 0,
                    double rel_tol = 1e-10);

struct M1Decomposition {
    double diagonal;       // sum d(k)^2 k^{-1/2} integral phi
    double off_diagonal;   // sum over j != k of the pair integrals
    double off_bound;      // sum of first-derivative-test bounds for the pairs
    double total;
    double direct;         // moment_rhs(T, K, 1)
    double rel_gap;
    bool bounds_hold;      // every pair integral within its bound
};

M1Decomposition moment_rhs_m1_decomposition(double T, std::uint64_t K, std::uint64_t K_prime = 0);

struct QuadrupleSum {
    std::complex<double> total;
    double diagonal;                     // D = 0 and E = 0: weight times integral phi
    std::complex<double> family;         // D = 0, E != 0: actual integrals
    std::complex<double> off_diagonal;   // D != 0
    std::size_t evaluated;
    std::size_t diagonal_count;
    std::size_t family_count;
    bool partial;                        // stopped at the cap
};

/// Signed sum over (K, 2K]^4 of d(m)d(n)d(k)d(l)(mnkl)^{-1/4} times the integral
/// of phi(t) e^{i D sqrt t + i E / sqrt t}. Stops after `cap` quadruples.
QuadrupleSum quadruple_moment_sum(double T, std::uint64_t K, std::size_t cap = 200'000);

struct RestrictedTerm {
    Quadruple q;
    double D, E;
    double weight;                      // signed d d d d (mnkl)^{-1/4}
    std::complex<double> term;          // weight Phi(sqrt(E/D)) E^{1/4} D^{-3/4} e^{2 i sqrt(DE)}
};

struct RestrictedSum {
    std::complex<double> value;
    double abs_sum;   // triangle-inequality majorant
    std::size_t count;
    std::vector<RestrictedTerm> terms;
};

inline constexpr double kNearIntegerC = 0.6;

/// Starred sum: l from the D-window, near-integer condition
/// || 2 sqrt k (sqrt m + sqrt n) - 2 sqrt(mn) || <= C D K^{1/2}, and C1 E <= D T <= C2 E.
RestrictedSum restricted_saddle_sum(double T, std::uint64_t K, double eta, double C1 = 0.5, double C2 = 8.0,
                                 double C_near = kNearIntegerC);

}  // namespace zetalab
