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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stochlre {

/// Dense matrix over GF(2), rows packed into 64-bit words.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    std::size_t stride() const {
        return stride_;
    }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1;
    }
    void set(std::size_t r, std::size_t c, bool v);
    void flip(std::size_t r, std::size_t c) {
        data_[r * stride_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
    }

    std::span<std::uint64_t> row(std::size_t r) {
        return {data_.data() + r * stride_, stride_};
    }
    std::span<const std::uint64_t> row(std::size_t r) const {
        return {data_.data() + r * stride_, stride_};
    }
    /// row(dst) ^= row(src)
    void xor_row(std::size_t dst, std::size_t src);

    /// Rank over GF(2); the matrix is left in row-echelon form.
    std::size_t eliminate();
    std::size_t rank() const;
    /// Reduced row-echelon form in place; returns the rank.
    std::size_t rref();

    /// Whether `v` (cols bits) lies in the row space.
    bool in_row_space(std::span<const std::uint64_t> v) const;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

/// In-place GF(2) rank of `rows` packed rows of `stride` words each.
/// Only the first `cols` bit columns are considered.
std::size_t gf2_rank_inplace(std::span<std::uint64_t> data, std::size_t rows, std::size_t stride, std::size_t cols);

}  // namespace stochlre
