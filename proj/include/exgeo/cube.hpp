#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "exgeo/types.hpp"

// Stratification of the cube M = [-1,1]^d into its 3^d open faces.
//
// A face fixes a subset of coordinates at -1 or +1 and leaves the rest free
// in (-1,1).  We encode each coordinate's role in a ternary digit
// (0: fixed at -1, 1: fixed at +1, 2: free) and use the resulting base-3
// integer as the face id, so ids are stable across runs and dimensions.

namespace exgeo {

struct FaceDescriptor {
  int face_id = 0;              // base-3 encoding of the coordinate roles
  int dim = 0;                  // number of free coordinates
  std::vector<int> free_coords; // ascending indices j with t_j free
  std::array<int8_t, kMaxDim> sign{};  // per coordinate: -1/+1 fixed, 0 free

  bool is_vertex() const { return dim == 0; }
  bool is_interior(int d) const { return dim == d; }

  // Representative point: fixed coordinates at their signs, free ones at 0.
  Vec center(int d) const {
    Vec c(d);
    for (int j = 0; j < d; ++j) c[j] = sign[j];
    return c;
  }
};

class CubeStrata {
public:
  // Enumerates all 3^d faces of [-1,1]^d.  Throws ValidationError when d is
  // zero/negative or exceeds max_dim (dimensions above the cap are untested
  // territory for the numeric machinery downstream, so we refuse them).
  explicit CubeStrata(int d, int max_dim = 4);

  int dim() const { return d_; }
  const std::vector<FaceDescriptor>& faces() const { return faces_; }
  const FaceDescriptor& face(int face_id) const { return faces_.at(face_id); }

  // Number of faces of dimension k: 2^(d-k) * C(d,k).
  int count_of_dim(int k) const;

  // The unique open face containing t: coordinates within boundary_tol of
  // -1/+1 count as fixed, everything else as free.  Throws ValidationError
  // if t lies outside the cube by more than boundary_tol.
  const FaceDescriptor& membership_face(const Vec& t, double boundary_tol = 1e-9) const;

  // Face id for an explicit role assignment (same encoding as FaceDescriptor).
  static int encode(const std::array<int8_t, kMaxDim>& sign, int d);

private:
  int d_;
  std::vector<FaceDescriptor> faces_;
};

}  // namespace exgeo
