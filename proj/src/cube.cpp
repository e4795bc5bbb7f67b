#include "exgeo/cube.hpp"

#include <cmath>

namespace exgeo {

CubeStrata::CubeStrata(int d, int max_dim) : d_(d) {
  if (d <= 0)
    throw ValidationError("CubeStrata: dimension must be positive, got " + std::to_string(d));
  if (d > max_dim || max_dim > kMaxDim)
    throw ValidationError("CubeStrata: dimension " + std::to_string(d) +
                          " exceeds cap " + std::to_string(std::min(max_dim, kMaxDim)));

  int total = 1;
  for (int j = 0; j < d; ++j) total *= 3;

  faces_.resize(total);
  for (int id = 0; id < total; ++id) {
    FaceDescriptor f;
    f.face_id = id;
    int code = id;
    for (int j = 0; j < d; ++j) {
      const int digit = code % 3;
      code /= 3;
      if (digit == 2) {
        f.sign[j] = 0;
        f.free_coords.push_back(j);
      } else {
        f.sign[j] = static_cast<int8_t>(digit == 0 ? -1 : +1);
      }
    }
    f.dim = static_cast<int>(f.free_coords.size());
    faces_[id] = std::move(f);
  }
}

int CubeStrata::count_of_dim(int k) const {
  int n = 0;
  for (const auto& f : faces_)
    if (f.dim == k) ++n;
  return n;
}

int CubeStrata::encode(const std::array<int8_t, kMaxDim>& sign, int d) {
  int id = 0;
  int pow3 = 1;
  for (int j = 0; j < d; ++j) {
    const int digit = sign[j] == 0 ? 2 : (sign[j] < 0 ? 0 : 1);
    id += digit * pow3;
    pow3 *= 3;
  }
  return id;
}

const FaceDescriptor& CubeStrata::membership_face(const Vec& t, double boundary_tol) const {
  if (t.size() != d_)
    throw ValidationError("membership_face: point dimension mismatch");
  std::array<int8_t, kMaxDim> sign{};
  for (int j = 0; j < d_; ++j) {
    const double x = t[j];
    if (std::abs(x - 1.0) <= boundary_tol)
      sign[j] = +1;
    else if (std::abs(x + 1.0) <= boundary_tol)
      sign[j] = -1;
    else if (x > -1.0 && x < 1.0)
      sign[j] = 0;
    else
      throw ValidationError("membership_face: coordinate " + std::to_string(j) +
                            " = " + std::to_string(x) + " lies outside [-1,1]");
  }
  return faces_[static_cast<size_t>(encode(sign, d_))];
}

}  // namespace exgeo
