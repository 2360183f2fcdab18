// Copyright 2026 The stochlre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stochlre/bit_matrix.h"

#include <algorithm>
#include <stdexcept>

#include "stochlre/pauli.h"

namespace stochlre {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for_bits(cols)), data_(rows * words_for_bits(cols), 0) {
}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t bit = std::uint64_t{1} << (c & 63);
    auto &w = data_[r * stride_ + (c >> 6)];
    w = v ? (w | bit) : (w & ~bit);
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src) {
    auto *d = data_.data() + dst * stride_;
    const auto *s = data_.data() + src * stride_;
    for (std::size_t k = 0; k < stride_; ++k) {
        d[k] ^= s[k];
    }
}

std::size_t gf2_rank_inplace(std::span<std::uint64_t> data, std::size_t rows, std::size_t stride, std::size_t cols) {
    if (data.size() < rows * stride) {
        throw std::invalid_argument("gf2_rank_inplace: buffer too small");
    }
    std::uint64_t *base = data.data();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t w = c >> 6;
        std::uint64_t bit = std::uint64_t{1} << (c & 63);
        std::size_t pivot = rank;
        while (pivot < rows && !(base[pivot * stride + w] & bit)) {
            ++pivot;
        }
        if (pivot == rows) {
            continue;
        }
        std::uint64_t *prow = base + pivot * stride;
        if (pivot != rank) {
            std::swap_ranges(prow, prow + stride, base + rank * stride);
            prow = base + rank * stride;
        }
        for (std::size_t r = rank + 1; r < rows; ++r) {
            std::uint64_t *row = base + r * stride;
            if (row[w] & bit) {
                // Columns below w are already zero in the pivot row.
                for (std::size_t k = w; k < stride; ++k) {
                    row[k] ^= prow[k];
                }
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t BitMatrix::eliminate() {
    return gf2_rank_inplace(data_, rows_, stride_, cols_);
}

std::size_t BitMatrix::rref() {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows_ && !get(pivot, c)) {
            ++pivot;
        }
        if (pivot == rows_) {
            continue;
        }
        if (pivot != rank) {
            auto a = row(pivot);
            auto b = row(rank);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r != rank && get(r, c)) {
                xor_row(r, rank);
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t BitMatrix::rank() const {
    BitMatrix copy = *this;
    return copy.eliminate();
}

bool BitMatrix::in_row_space(std::span<const std::uint64_t> v) const {
    if (v.size() != stride_) {
        throw std::invalid_argument("in_row_space: vector width mismatch");
    }
    BitMatrix extended(rows_ + 1, cols_);
    std::copy(data_.begin(), data_.end(), extended.data_.begin());
    std::copy(v.begin(), v.end(), extended.data_.begin() + static_cast<std::ptrdiff_t>(rows_ * stride_));
    return extended.eliminate() == rank();
}

}  // namespace stochlre
