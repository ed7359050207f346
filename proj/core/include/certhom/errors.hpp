#pragma once

#include <stdexcept>
#include <string>

namespace certhom {

// Raised when the stacked matrix [Dh(z); z^*] is numerically singular.
class SingularJacobianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A homotopy solve returned fewer distinct endpoints than the Bezout number.
class RootCountError : public std::runtime_error {
 public:
  RootCountError(const std::string& what, std::size_t found,
                 std::size_t expected)
      : std::runtime_error(what), found_(found), expected_(expected) {}
  std::size_t found() const { return found_; }
  std::size_t expected() const { return expected_; }

 private:
  std::size_t found_;
  std::size_t expected_;
};

// Validation oracle could not produce a trustworthy root set.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace certhom
