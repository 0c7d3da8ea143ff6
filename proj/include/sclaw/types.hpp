#ifndef SCLAW_TYPES_HPP
#define SCLAW_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sclaw {

using Vector = Eigen::VectorXd;
using Array = Eigen::ArrayXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when a result contradicts a structural property the method relies on
/// (positivity of the Cole-Hopf potential, monotonicity in the random parameter).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised when a numerical procedure fails to converge or becomes unstable.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Initial-data family for the periodic Burgers problem with s(x) = sin x.
///   I : u0(x, xi) = sin x + xi,  xi ~ N(0, sigma^2)
///   II: u0(x, xi) = xi sin x,    xi ~ Gamma(shape, scale)
enum class CaseId { I, II };

inline std::string_view to_string(CaseId c) { return c == CaseId::I ? "I" : "II"; }

inline CaseId case_from_string(std::string_view s) {
    if (s == "I" || s == "i" || s == "1") return CaseId::I;
    if (s == "II" || s == "ii" || s == "2") return CaseId::II;
    throw std::invalid_argument("unknown case id '" + std::string(s) + "'");
}

/// Distribution parameters of xi. Only the fields of the selected case are used.
struct ModelParams {
    CaseId case_id = CaseId::I;
    double sigma = 0.5;  // Case I standard deviation
    double shape = 2.8;  // Case II Gamma shape k
    double scale = 0.18; // Case II Gamma scale theta

    static ModelParams case_i(double sigma = 0.5) { return {CaseId::I, sigma, 2.8, 0.18}; }
    static ModelParams case_ii(double shape = 2.8, double scale = 0.18) {
        return {CaseId::II, 0.5, shape, scale};
    }

    void validate() const {
        if (case_id == CaseId::I && !(sigma > 0.0))
            throw std::invalid_argument("Case I requires sigma > 0");
        if (case_id == CaseId::II && !(shape > 0.0 && scale > 0.0))
            throw std::invalid_argument("Case II requires shape > 0 and scale > 0");
    }
};

/// Value and first two spatial derivatives of a sample solution at one point.
struct Fields {
    double u = 0.0;
    double ux = 0.0;
    double uxx = 0.0;
};

/// Wraps x into [0, 2*pi).
inline double wrap_periodic(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

}  // namespace sclaw

#endif  // SCLAW_TYPES_HPP
