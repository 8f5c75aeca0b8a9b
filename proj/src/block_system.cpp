#include "freqstokes/block_system.hpp"

#include <algorithm>
#include <array>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace freqstokes {

namespace {

constexpr bool structurally_nonzero(int dim, int r, int c) {
    const int pr = dim, ui = dim + 1, pi = 2 * dim + 1;
    if (r < dim) return c == r || c == pr || c == ui + r;       // momentum (real)
    if (r == pr) return c < dim || c == pr || c == pi;          // continuity (real)
    if (r < pi) { const int k = r - ui; return c == k || c == r || c == pi; } // momentum (imag)
    return c == pr || (c >= ui && c < pi) || c == pi;           // continuity (imag)
}

std::vector<BlockSlot> build_mask(int dim) {
    std::vector<BlockSlot> mask;
    const int bs = 2 * (dim + 1);
    for (int r = 0; r < bs; ++r)
        for (int c = 0; c < bs; ++c)
            if (structurally_nonzero(dim, r, c)) mask.push_back({r, c});
    return mask;
}

template <int DIM>
consteval auto make_mask_array() {
    std::array<BlockSlot, 8 * DIM + 4> m{};
    int n = 0;
    for (int r = 0; r < 2 * (DIM + 1); ++r)
        for (int c = 0; c < 2 * (DIM + 1); ++c)
            if (structurally_nonzero(DIM, r, c)) m[n++] = {r, c};
    return m;
}

template <int DIM>
void matvec_kernel(const std::vector<int>& row_ptr, const std::vector<int>& col,
                   const std::vector<double>& vals, const double* x, double* y, int n_nodes) {
    static constexpr auto MASK = make_mask_array<DIM>();
    constexpr int BS = 2 * (DIM + 1);
    constexpr int NS = 8 * DIM + 4;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n_nodes; ++i) {
        double acc[BS] = {};
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            const double* v = vals.data() + static_cast<size_t>(k) * NS;
            const double* xj = x + static_cast<size_t>(col[k]) * BS;
            [&]<size_t... S>(std::index_sequence<S...>) {
                ((acc[MASK[S].r] += v[S] * xj[MASK[S].c]), ...);
            }(std::make_index_sequence<NS>{});
        }
        double* yi = y + static_cast<size_t>(i) * BS;
        for (int d = 0; d < BS; ++d) yi[d] = acc[d];
    }
}

} // namespace

const std::vector<BlockSlot>& block_mask(int dim) {
    static const std::vector<BlockSlot> m2 = build_mask(2);
    static const std::vector<BlockSlot> m3 = build_mask(3);
    if (dim == 2) return m2;
    if (dim == 3) return m3;
    throw LinSolveError("dimension must be 2 or 3");
}

const std::vector<int>& block_slot_lookup(int dim) {
    static const auto build = [](int d) {
        const int bs = 2 * (d + 1);
        std::vector<int> lut(static_cast<size_t>(bs) * bs, -1);
        const auto& mask = block_mask(d);
        for (size_t s = 0; s < mask.size(); ++s) lut[mask[s].r * bs + mask[s].c] = static_cast<int>(s);
        return lut;
    };
    static const std::vector<int> l2 = build(2);
    static const std::vector<int> l3 = build(3);
    return dim == 2 ? l2 : l3;
}

BlockSparseMatrix::BlockSparseMatrix(int dim, int n_nodes, std::vector<std::pair<int, int>> pairs)
    : dim_(dim), n_nodes_(n_nodes) {
    if (dim != 2 && dim != 3) throw LinSolveError("dimension must be 2 or 3");
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    row_ptr_.assign(n_nodes_ + 1, 0);
    col_.resize(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k) {
        if (pairs[k].first < 0 || pairs[k].first >= n_nodes_ || pairs[k].second < 0 ||
            pairs[k].second >= n_nodes_)
            throw LinSolveError("pair index out of range");
        row_ptr_[pairs[k].first + 1] += 1;
        col_[k] = pairs[k].second;
    }
    for (int i = 0; i < n_nodes_; ++i) row_ptr_[i + 1] += row_ptr_[i];
    vals_.assign(pairs.size() * static_cast<size_t>(slots_per_pair()), 0.0);
}

int BlockSparseMatrix::find_pair(int i, int j) const {
    const int* first = col_.data() + row_ptr_[i];
    const int* last = col_.data() + row_ptr_[i + 1];
    const int* it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return -1;
    return static_cast<int>(it - col_.data());
}

void BlockSparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != size() || static_cast<int>(y.size()) != size())
        throw LinSolveError("matvec dimension mismatch");
    if (dim_ == 3)
        matvec_kernel<3>(row_ptr_, col_, vals_, x.data(), y.data(), n_nodes_);
    else
        matvec_kernel<2>(row_ptr_, col_, vals_, x.data(), y.data(), n_nodes_);
}

void BlockSparseMatrix::materialize_block(int pair, double* dense) const {
    const int bs = block_size();
    std::fill(dense, dense + bs * bs, 0.0);
    const auto& mask = block_mask(dim_);
    const double* v = pair_values(pair);
    for (size_t s = 0; s < mask.size(); ++s) dense[mask[s].r * bs + mask[s].c] = v[s];
}

} // namespace freqstokes
