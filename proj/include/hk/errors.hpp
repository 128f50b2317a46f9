#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hk {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// project_unitary: input not invertible enough to carry a polar factor.
class SingularInput : public Error {
public:
  using Error::Error;
};

// principal_log: an eigenvalue sits on (or winds past) the -1 branch cut.
// Carries the offending tet when raised from a per-cell evaluation.
class BranchCut : public Error {
public:
  explicit BranchCut(const std::string& what, std::ptrdiff_t tet = -1)
      : Error(what), tet_index(tet) {}
  std::ptrdiff_t tet_index;
};

class MeshMismatch : public Error {
public:
  using Error::Error;
};

class ResourceLimit : public Error {
public:
  using Error::Error;
};

class SizeMismatch : public Error {
public:
  using Error::Error;
};

// homology(): boundary maps do not compose to zero.
class NotAComplex : public Error {
public:
  using Error::Error;
};

// Triple-overlap trace too close to zero; map under-resolved on a triangle.
class DegenerateTriangle : public Error {
public:
  explicit DegenerateTriangle(const std::string& what, std::ptrdiff_t tri = -1)
      : Error(what), triangle_index(tri) {}
  std::ptrdiff_t triangle_index;
};

// A rounded quantity sits too far from the nearest integer to be trusted.
class GapTooLarge : public Error {
public:
  explicit GapTooLarge(const std::string& what, double gap = 0.0)
      : Error(what), gap_value(gap) {}
  double gap_value;
};

class SolveFailed : public Error {
public:
  using Error::Error;
};

class NotAStabilizer : public Error {
public:
  using Error::Error;
};

// pointwise_transporter: projector tuples too close to an eigenvalue
// crossing (antipodal pair on S^2).
class AntipodalDegenerate : public Error {
public:
  explicit AntipodalDegenerate(const std::string& what, std::ptrdiff_t vertex = -1)
      : Error(what), vertex_index(vertex) {}
  std::ptrdiff_t vertex_index;
};

// construct_lift: no lift exists, the primary invariants differ.
class PrimaryMismatch : public Error {
public:
  using Error::Error;
};

class NonConvergent : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace hk
