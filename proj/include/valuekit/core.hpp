#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace valuekit {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected input: the caller handed us something that violates a contract.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Network-level failure talking to an external service.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A payload or file that could not be parsed.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked on a model in the wrong mode.
class ModeMismatchError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A reward term left the representable range.
class RewardOverflowError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Value dimensions
// ---------------------------------------------------------------------------

// The ten basic value dimensions. Enumerator order is the canonical order
// (alphabetical by short code) used for every serialized vector and report.
enum class ValueDimension : int {
  Achievement = 0,
  Benevolence,
  Conformity,
  Hedonism,
  Power,
  Security,
  SelfDirection,
  Stimulation,
  Tradition,
  Universalism,
};

inline constexpr int kNumDimensions = 10;

inline constexpr std::array<ValueDimension, kNumDimensions> kAllDimensions = {
    ValueDimension::Achievement, ValueDimension::Benevolence,
    ValueDimension::Conformity,  ValueDimension::Hedonism,
    ValueDimension::Power,       ValueDimension::Security,
    ValueDimension::SelfDirection, ValueDimension::Stimulation,
    ValueDimension::Tradition,   ValueDimension::Universalism,
};

// Short code, e.g. "ACH". Stable across runs; used as column headers.
std::string_view dimension_code(ValueDimension d);

// Full identifier, e.g. "ACHIEVEMENT".
std::string_view dimension_name(ValueDimension d);

// Higher-order group tag (metadata only), e.g. "self-enhancement".
std::string_view dimension_group(ValueDimension d);

// Accepts a short code or full name, case-insensitively.
std::optional<ValueDimension> parse_dimension(std::string_view text);

// Like parse_dimension but throws InvalidInputError naming the input.
ValueDimension require_dimension(std::string_view text);

// ---------------------------------------------------------------------------
// Utilities and value vectors
// ---------------------------------------------------------------------------

// A scalar utility in [-1, 1]. +1 promotes the value, -1 hinders it,
// 0 means unrelated.
struct Utility {
  double value = 0.0;

  Utility() = default;
  explicit Utility(double v);  // throws InvalidInputError outside [-1, 1]
};

// Dense ten-dimensional utility profile, indexed by ValueDimension in
// canonical order. Components are unconstrained here; operations that
// require unit or in-range vectors validate at their boundaries.
class ValueVector {
 public:
  ValueVector() { components_.fill(0.0); }
  explicit ValueVector(const std::array<double, kNumDimensions>& c)
      : components_(c) {}

  double operator[](ValueDimension d) const {
    return components_[static_cast<int>(d)];
  }
  double& operator[](ValueDimension d) {
    return components_[static_cast<int>(d)];
  }
  double at_index(int i) const { return components_.at(i); }
  void set(ValueDimension d, double v) { components_[static_cast<int>(d)] = v; }

  const std::array<double, kNumDimensions>& components() const {
    return components_;
  }

  bool operator==(const ValueVector& other) const = default;

 private:
  std::array<double, kNumDimensions> components_;
};

// Euclidean norm.
double l2_norm(const ValueVector& v);

// Scales v to unit Euclidean norm; the zero vector is returned unchanged.
ValueVector normalize(const ValueVector& v);

// Standard inner product over the ten components.
double dot(const ValueVector& a, const ValueVector& b);

// True when the norm is within tol of 0 or 1.
bool is_unit_or_zero(const ValueVector& v, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Scenarios and annotations
// ---------------------------------------------------------------------------

struct Scenario {
  std::string id;
  std::string text;
};

enum class Vote { Yes, No, Unrelated };

std::string_view vote_name(Vote v);

// Accepts "yes" / "no" / "unrelated", case-insensitively; throws
// InvalidInputError naming the offending value otherwise.
Vote parse_vote(std::string_view text);

// yes -> +1, no -> -1, unrelated -> 0.
int quantize_vote(Vote v);
int quantize_vote(std::string_view vote_text);

struct Annotation {
  std::string scenario_id;
  ValueDimension dimension = ValueDimension::Achievement;
  std::string worker_id;
  Vote vote = Vote::Unrelated;
};

struct AnnotatedSample {
  Scenario scenario;
  ValueDimension dimension = ValueDimension::Achievement;
  int label = 0;      // in {-1, 0, +1}
  int agreement = 0;  // concurring votes for the modal label
};

struct DatasetSplit {
  std::vector<AnnotatedSample> train;
  std::vector<AnnotatedSample> valid;
  std::vector<AnnotatedSample> test;
  std::uint64_t seed = 0;
};

}  // namespace valuekit
