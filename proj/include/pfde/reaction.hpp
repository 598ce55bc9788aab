#pragma once

#include <string>
#include <vector>

#include "pfde/coeff.hpp"
#include "pfde/common.hpp"
#include "pfde/driver.hpp"

namespace pfde {

enum class Catalog { Linear, DelayedLogistic, CooperativeLV, Custom };

std::string to_string(Catalog c);
Catalog catalog_from_string(const std::string& name);

// One monomial of a Custom reaction: coef(omega, x) * prod y_j^ypow_j * prod yd_j^dpow_j
// added to component `target`.
struct CustomTerm {
    int target = 0;
    CoeffTable coef;
    std::vector<int> ypow;
    std::vector<int> dpow;
};

// Typed reaction catalog with coefficient tables. Every entry carries exact
// Jacobians; the finite-difference consistency of eval/jacobians is a tested
// invariant. yd denotes the delayed state y(t-1, x).
//
//   Linear           f = A(omega,x) y + B(omega,x) yd
//   DelayedLogistic  f_i = y_i (a_i(omega,x) - b_i(omega,x) yd_i)
//   CooperativeLV    f_i = y_i (a_i - b_i y_i) + sum_{j!=i} (c_ij y_j + e_ij yd_j)
//   Custom           sum of monomial terms with table coefficients
class ReactionTerm {
public:
    Catalog catalog = Catalog::Linear;
    int n = 1;

    // Linear
    std::vector<CoeffTable> A, B;  // n*n row-major, may be empty (zero)
    // DelayedLogistic / CooperativeLV
    std::vector<CoeffTable> a, b;  // n
    std::vector<CoeffTable> c, e;  // n*n row-major, zero diagonal
    // Custom
    std::vector<CustomTerm> terms;

    // Structural quasimonotone flag: set by the ingestion audit, meaning the
    // (C4)-type sign conditions held on the audit box for this entry.
    bool quasimonotone = false;

    void validate(std::size_t driver_dim) const;

    // f(omega, x, y, yd) into f_out (size n).
    void eval(const DriverState& omega, double x, const double* y, const double* yd,
              double* f_out) const;

    // D_y f and D_yd f at (omega, x, y, yd), row-major n*n.
    void jacobians(const DriverState& omega, double x, const double* y, const double* yd,
                   double* dy_out, double* dyd_out) const;
};

// Convenience eval/jacobian wrappers with vector in/out.
std::vector<double> eval_reaction(const ReactionTerm& r, const DriverState& omega, double x,
                                  const std::vector<double>& y, const std::vector<double>& yd);
void eval_jacobians(const ReactionTerm& r, const DriverState& omega, double x,
                    const std::vector<double>& y, const std::vector<double>& yd,
                    std::vector<double>& dy, std::vector<double>& dyd);

}  // namespace pfde
