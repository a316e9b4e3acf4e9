#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrgf {

// Input outside the domain a recursion is defined on. The message names the
// violated precondition.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Coupling flow hit a pole (XXZ J-flow at Delta = -1/2).
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// exp() underflows to zero below this; log_f stays the faithful record.
inline constexpr double kLogUnderflow = -745.0;

enum class Model { itf, xxz };

inline const char* model_name(Model m) { return m == Model::itf ? "itf" : "xxz"; }

struct FidelityResult {
  double log_f;    // ln of the ground-state fidelity, <= 0
  double f;        // exp(log_f), or 0 with log_f retained once exp underflows
  double n_delta;  // regime indicator N*|delta|
  int ell;         // RG levels used (0 when a closed form bypasses iteration)
};

inline FidelityResult make_fidelity_result(double log_f, double n_delta, int ell) {
  const double f = log_f > kLogUnderflow ? std::exp(log_f) : 0.0;
  return FidelityResult{log_f, f, n_delta, ell};
}

}  // namespace qrgf
