#pragma once

#include <stdexcept>
#include <string>

namespace rtz {

// All library failures derive from rtz::error so callers can catch broadly.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define RTZ_DEFINE_ERROR(name)            \
  struct name : error {                   \
    using error::error;                   \
  }

RTZ_DEFINE_ERROR(invalid_spec);
RTZ_DEFINE_ERROR(invalid_config);
RTZ_DEFINE_ERROR(factor_unavailable);
RTZ_DEFINE_ERROR(non_integer_zero_count);
RTZ_DEFINE_ERROR(near_singular_argument);
RTZ_DEFINE_ERROR(empty_interval);
RTZ_DEFINE_ERROR(unsupported_scheme);
RTZ_DEFINE_ERROR(degenerate_input);
RTZ_DEFINE_ERROR(not_bracketed);
RTZ_DEFINE_ERROR(vanishing_a);
RTZ_DEFINE_ERROR(quadrature_not_converged);

#undef RTZ_DEFINE_ERROR

}  // namespace rtz
