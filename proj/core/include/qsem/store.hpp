#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsem/tensor.hpp"

namespace qsem {

// Plain-text tensor file:
//   dims <d1> <d2> ...
//   i1 i2 ... value          (one stored entry per line, 17 significant digits)
// Round-trips doubles exactly.  '#' starts a comment line.
void save_tensor(const std::string& path, const MeaningTensor& t);
MeaningTensor load_tensor(const std::string& path);

// A directory of tensor files plus manifest.tsv (token, wire count, relative
// path; sorted by token).
class VectorStore {
  public:
    void put(const std::string& token, MeaningTensor t);
    bool contains(const std::string& token) const;
    const MeaningTensor& at(const std::string& token) const;  // StoreError if absent
    std::size_t size() const { return tensors_.size(); }
    const std::map<std::string, MeaningTensor>& tensors() const { return tensors_; }

    void save(const std::string& dir) const;
    static VectorStore load(const std::string& dir);

  private:
    std::map<std::string, MeaningTensor> tensors_;
};

}  // namespace qsem
