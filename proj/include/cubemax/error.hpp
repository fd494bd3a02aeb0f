#ifndef CUBEMAX_ERROR_HPP
#define CUBEMAX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cubemax {

enum class Errc {
  dimension_mismatch,
  invalid_argument,
  non_dyadic_side,
  empty_domain,
  zero_variation_input,
  precondition_density,
  premise_violated,
  not_dyadically_complete,
  unsupported_dimension,
  io_error,
  config_error,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cubemax

#endif  // CUBEMAX_ERROR_HPP
