#include "freqstokes/linsolve.hpp"

#include <cinttypes>
#include <cstdio>

namespace freqstokes {

JacobiScaling jacobi_scale_in_place(BlockSystem& sys) {
    BlockSparseMatrix& K = sys.matrix;
    const int bs = K.block_size();
    const auto& mask = block_mask(K.dim());

    JacobiScaling sc;
    sc.s.assign(K.size(), 1.0);
    for (int i = 0; i < K.num_nodes(); ++i) {
        const int pk = K.find_pair(i, i);
        if (pk < 0) throw LinSolveError("matrix has no diagonal block at node " + std::to_string(i));
        const double* v = K.pair_values(pk);
        const auto& lut = block_slot_lookup(K.dim());
        for (int d = 0; d < bs; ++d) {
            const int s = lut[d * bs + d];
            const double kd = (s >= 0) ? v[s] : 0.0;
            if (kd == 0.0) {
                sc.zero_diagonal_count += 1;
                sc.s[static_cast<size_t>(i) * bs + d] = 1.0;
            } else {
                sc.s[static_cast<size_t>(i) * bs + d] = 1.0 / std::sqrt(std::abs(kd));
            }
        }
    }

    const auto& row_ptr = K.row_ptr();
    const auto& col = K.col_index();
    for (int i = 0; i < K.num_nodes(); ++i) {
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            double* v = K.pair_values(k);
            const double* si = sc.s.data() + static_cast<size_t>(i) * bs;
            const double* sj = sc.s.data() + static_cast<size_t>(col[k]) * bs;
            for (size_t m = 0; m < mask.size(); ++m) v[m] *= si[mask[m].r] * sj[mask[m].c];
        }
    }
    for (size_t d = 0; d < sys.rhs.size(); ++d) sys.rhs[d] *= sc.s[d];
    return sc;
}

void unscale_solution(const JacobiScaling& sc, std::span<double> x) {
    if (x.size() != sc.s.size()) throw LinSolveError("unscale dimension mismatch");
    for (size_t d = 0; d < x.size(); ++d) x[d] *= sc.s[d];
}

void write_matrix_market(const BlockSparseMatrix& K, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw LinSolveError(path + ": cannot open for writing");
    const auto& mask = block_mask(K.dim());
    const int bs = K.block_size();
    const auto& row_ptr = K.row_ptr();
    const auto& col = K.col_index();

    int64_t nnz = 0;
    for (int i = 0; i < K.num_nodes(); ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            for (const auto& s : mask)
                if (static_cast<int64_t>(i) * bs + s.r >= static_cast<int64_t>(col[k]) * bs + s.c)
                    ++nnz;

    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real symmetric\n");
    std::fprintf(f, "%" PRId64 " %" PRId64 " %" PRId64 "\n", static_cast<int64_t>(K.size()),
                 static_cast<int64_t>(K.size()), nnz);
    for (int i = 0; i < K.num_nodes(); ++i) {
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            const double* v = K.pair_values(k);
            for (size_t m = 0; m < mask.size(); ++m) {
                const int64_t gr = static_cast<int64_t>(i) * bs + mask[m].r;
                const int64_t gc = static_cast<int64_t>(col[k]) * bs + mask[m].c;
                if (gr < gc) continue;
                std::fprintf(f, "%" PRId64 " %" PRId64 " %.17g\n", gr + 1, gc + 1, v[m]);
            }
        }
    }
    std::fclose(f);
}

} // namespace freqstokes
