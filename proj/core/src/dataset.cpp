#include "clam/dataset.hpp"

#include <stdexcept>
#include <string>

namespace clam {

Dataset::Dataset(std::size_t length, int alphabet_size, std::vector<int> flat)
    : length_(length), alphabet_size_(alphabet_size), flat_(std::move(flat)) {
    if (length_ == 0) throw std::invalid_argument("Dataset: zero pattern length");
    if (alphabet_size_ < 2) throw std::invalid_argument("Dataset: alphabet size must be >= 2");
    if (flat_.size() % length_ != 0)
        throw std::invalid_argument("Dataset: flat storage is not a multiple of pattern length");
    count_ = flat_.size() / length_;
    for (int v : flat_) {
        if (v < 0 || v >= alphabet_size_)
            throw std::invalid_argument("Dataset: entry " + std::to_string(v) +
                                        " outside [0, " + std::to_string(alphabet_size_ - 1) + "]");
    }
}

}  // namespace clam
