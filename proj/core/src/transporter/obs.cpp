#include "pickplace/transporter/obs.hpp"

#include <algorithm>
#include <cmath>

namespace transporter {

template <typename T>
tensorgrad::TensorT<T> preprocess(const recon::Heightmap& hm) {
  const int64_t plane = hm.plane();
  std::vector<T> data(4 * plane);
  for (int64_t i = 0; i < 3 * plane; ++i)
    data[i] = static_cast<T>(hm.data[i]) - T(0.5);
  for (int64_t i = 0; i < plane; ++i)
    data[3 * plane + i] = static_cast<T>(hm.data[3 * plane + i]) * T(10) - T(0.5);
  return tensorgrad::TensorT<T>::from_data({4, hm.rows(), hm.cols()}, std::move(data));
}

int default_crop(int rows, int cols) {
  int c = static_cast<int>(std::ceil(0.4 * std::min(rows, cols)));
  if (c % 2 == 0) ++c;
  return std::max(c, 3);
}

template tensorgrad::TensorT<float> preprocess(const recon::Heightmap&);
template tensorgrad::TensorT<double> preprocess(const recon::Heightmap&);

}  // namespace transporter
