#pragma once

#include <stdexcept>
#include <string>

namespace tpts {

enum class errc {
  overmodulation,
  invalid_dc,
  indeterminate_sector,
  sector_mismatch,
  domain,
  window,
  undefined_thd,
  config,
  instability,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace tpts
