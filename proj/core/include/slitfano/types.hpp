#pragma once
#include <complex>
#include <stdexcept>
#include <string>

namespace slitfano {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
    InvalidArgument,
    BranchPointProximity,
    SingularArgument,
    NonConvergence,
    ModeResonance,
    QuadratureFailure,
    SingularSystem,
    SingularOperator,
    OutsideValidRegion,
    DivisionByZeroLambda,
    ContourThroughZero,
    BranchCut,
    NoConvergence,
    EscapedRegion,
    RootCountMismatch,
    FeatureNotFound,
    ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Grating geometry. Slab thickness is 1.
struct PhysicalConfig {
    double d = 1.0;    // period
    double d0 = 0.4;   // slit centre separation
    double eps = 0.05; // slit width

    void validate() const;
    double thickness() const { return 1.0; }
};

// Complex frequency and real Bloch wavenumber.
struct SpectralPoint {
    cplx k;
    double kappa = 0.0;
};

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct Tolerances {
    double series = 1e-13;      // absolute truncation target for lattice sums
    double wood_margin = 1e-6;  // minimum distance to a Rayleigh branch point
    long max_terms = 1000000;   // cap on accelerated tails
};

} // namespace slitfano
