#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "slitfano/asymptotics.hpp"

namespace slitfano {

using ComplexFn = std::function<cplx(cplx)>;

// Axis-aligned rectangle in the complex k-plane.
struct Box {
    cplx center;
    double half_width = 0.3;
    double half_height = 0.3;

    bool contains(cplx z) const {
        return std::abs(z.real() - center.real()) <= half_width && std::abs(z.imag() - center.imag()) <= half_height;
    }
};

struct RootCount {
    int count = 0;
    double estimate = 0.0; // unrounded winding number
    int points = 0;        // nodes per edge at acceptance
};

// Winding number of f around 0 along the box boundary, from the trapezoid rule on f'/f with
// central differences. Doubles the nodes per edge until two successive estimates round to the same
// integer within 0.25. branch_points are the real k where a Rayleigh root has its cut.
RootCount count_roots(const ComplexFn& f, const Box& box, int quad_points = 32,
                      const std::vector<double>& branch_points = {});

struct RefineResult {
    cplx k;
    int iterations = 0;
    double residual = 0.0;
};

// Muller iteration from seed until |f| < 1e-10 and |dk| < 1e-12.
RefineResult refine_root(const ComplexFn& f, cplx seed, const Box& region, double step = 1e-3);

enum class Family { FabryPerot, Embedded };
enum class RootMethod { asymptotic, numeric_hat, numeric_full };

const char* to_string(Family f);
const char* to_string(RootMethod m);

struct ResonanceBranch {
    int m = 1;
    Family family = Family::FabryPerot;
    int parity = 1;
    cplx k;
    double kappa = 0.0;
    double eps = 0.0;
    RootMethod method = RootMethod::asymptotic;
    double residual = 0.0;
    int count = 0; // roots found by counting in the verification box (0 for asymptotic rows)
};

// lambda_{j, parity}(k) from the closed form or the discrete operator.
class LambdaFunction {
public:
    LambdaFunction(const PhysicalConfig& cfg, double kappa, double alpha); // closed form
    explicit LambdaFunction(std::shared_ptr<const FullModel> model);      // discrete operator

    cplx operator()(cplx k, int j, int parity) const;
    // lambda times sin(k/2) (parity +) or cos(k/2) (parity -): removes the poles of beta +/- beta~ at
    // k = 2n pi and (2n+1) pi without adding zeros.
    cplx regularized(cplx k, int j, int parity) const;
    bool full() const { return model_ != nullptr; }

private:
    PhysicalConfig cfg_;
    double kappa_ = 0.0;
    double alpha_ = 0.0;
    std::shared_ptr<const FullModel> model_;
};

// Rayleigh branch points |kappa_n| below k_max.
std::vector<double> rayleigh_branch_points(const PhysicalConfig& cfg, double kappa, double k_max);

// Half-width of the verification box around a refined root.
double verification_half_width(double eps);

struct ResonanceSearch {
    int N = 32;               // basis size for use_full
    double alpha = 0.0;       // 0: default_alpha()
    int threads = 0;
    bool verify = true;       // run count_roots around each root
};

std::vector<ResonanceBranch> find_resonances(const PhysicalConfig& cfg, double kappa, int m_max, bool use_full,
                                             const ResonanceSearch& opts = {});

// Closed-form rows for the same (m, family) set.
std::vector<ResonanceBranch> predicted_resonances(const PhysicalConfig& cfg, double kappa, int m_max, double alpha);

} // namespace slitfano
