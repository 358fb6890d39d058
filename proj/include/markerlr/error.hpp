#ifndef MARKERLR_ERROR_HPP
#define MARKERLR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace markerlr {

/// Base class for every error raised by the library. `category()` is the
/// machine-readable name the CLI prints next to its exit code.
class Error : public std::runtime_error {
public:
  Error(std::string_view category, const std::string &what)
      : std::runtime_error(what), category_(category) {}

  std::string_view category() const noexcept { return category_; }

private:
  std::string_view category_;
};

#define MARKERLR_DEFINE_ERROR(Name)                                            \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name, what) {}             \
  };

/// Zero-variance input: the likelihood or bandwidth is undefined.
MARKERLR_DEFINE_ERROR(DegenerateData)
/// Per-condition sample size outside the statistic's validity regime.
MARKERLR_DEFINE_ERROR(RegimeViolation)
/// The sorted statistics show no sudden drop.
MARKERLR_DEFINE_ERROR(NoGapFound)
MARKERLR_DEFINE_ERROR(InvalidSpec)
MARKERLR_DEFINE_ERROR(TruthMismatch)
MARKERLR_DEFINE_ERROR(ParseError)
MARKERLR_DEFINE_ERROR(LayoutError)
MARKERLR_DEFINE_ERROR(ValueError)
MARKERLR_DEFINE_ERROR(ConfigError)

#undef MARKERLR_DEFINE_ERROR

} // namespace markerlr

#endif // MARKERLR_ERROR_HPP
