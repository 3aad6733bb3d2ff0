#pragma once

#include <map>
#include <string>
#include <vector>

#include "pickplace/tensorgrad/tensor.hpp"

namespace tensorgrad {

// Binary checkpoint: magic, a JSON metadata blob, then named float32
// parameter records. Round-trips are bit-exact for float data.
struct Checkpoint {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Tensor>> params;

  const Tensor* find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Copies values from a loaded checkpoint into live parameters, matching by
// name. Throws if a parameter is missing or shapes disagree.
void restore_params(const Checkpoint& ckpt, std::vector<Tensor>& params);

}  // namespace tensorgrad
