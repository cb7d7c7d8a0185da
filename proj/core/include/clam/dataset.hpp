#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace clam {

// Integer-valued patterns over the alphabet {0, ..., Q-1}, stored row-major.
class Dataset {
public:
    // flat holds count * length entries; validates alphabet bounds.
    Dataset(std::size_t length, int alphabet_size, std::vector<int> flat);

    std::size_t size() const { return count_; }        // C
    std::size_t length() const { return length_; }     // n
    int alphabet_size() const { return alphabet_size_; }

    std::span<const int> pattern(std::size_t i) const {
        return {flat_.data() + i * length_, length_};
    }
    std::span<const int> flat() const { return flat_; }

private:
    std::size_t length_;
    int alphabet_size_;
    std::vector<int> flat_;
    std::size_t count_;
};

}  // namespace clam
