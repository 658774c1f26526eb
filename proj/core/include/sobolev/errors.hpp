#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N or p outside the admissible range (N >= 2, 1 < p < N).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of an operation (r <= 0, s <= 1, t >= s, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A theorem or lemma hypothesis is not met by the supplied input.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// The perturbation seed lies in the tangent span of the extremal manifold.
class DegeneratePerturbationError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature or an iterative method failed to reach its tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved)
      : Error(what + " (achieved relative error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  [[nodiscard]] double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A sampled constant estimate came out nonpositive.
class EstimationFailure : public Error {
 public:
  using Error::Error;
};

/// An experiment cannot produce a result (empty family, too few fit points).
class ExperimentError : public Error {
 public:
  using Error::Error;
};

}  // namespace sobolev
