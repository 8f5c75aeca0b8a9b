#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace freqstokes {

class LinSolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One structurally nonzero scalar slot of a node-pair block. The block is
/// 2(dim+1) square with per-node unknown layout [u_r(0..dim-1), p_r,
/// u_i(0..dim-1), p_i]; of its 4(dim+1)^2 scalar slots exactly 8 dim + 4 are
/// structurally nonzero (velocity diagonals from the viscous and frequency
/// couplings, velocity/pressure gradient and divergence vectors, and the four
/// pressure-pressure stabilization scalars).
struct BlockSlot {
    int r = 0, c = 0;
};

/// Structural mask, row-major over (r, c); size 8*dim + 4.
const std::vector<BlockSlot>& block_mask(int dim);
/// bs*bs lookup table: slot index in the mask, or -1 for structural zeros.
const std::vector<int>& block_slot_lookup(int dim);

/// Symmetric block-sparse matrix over node pairs in compressed-row layout.
/// Only the structurally nonzero scalar slots of each block are stored, in
/// mask order; the matrix-vector product visits exactly those slots.
class BlockSparseMatrix {
public:
    BlockSparseMatrix() = default;
    /// pairs: directed (i, j) adjacency, must include the transpose of every
    /// entry and the diagonal. Values start at zero.
    BlockSparseMatrix(int dim, int n_nodes, std::vector<std::pair<int, int>> pairs);

    int dim() const { return dim_; }
    int block_size() const { return 2 * (dim_ + 1); }
    int slots_per_pair() const { return 8 * dim_ + 4; }
    int num_nodes() const { return n_nodes_; }
    int num_pairs() const { return static_cast<int>(col_.size()); }
    int size() const { return n_nodes_ * block_size(); } // scalar unknowns

    /// Index into the pair list, or -1 when (i, j) is not stored.
    int find_pair(int i, int j) const;
    double* pair_values(int k) { return vals_.data() + static_cast<size_t>(k) * slots_per_pair(); }
    const double* pair_values(int k) const {
        return vals_.data() + static_cast<size_t>(k) * slots_per_pair();
    }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_index() const { return col_; }
    std::vector<double>& values() { return vals_; }
    const std::vector<double>& values() const { return vals_; }

    /// y = A x visiting only the structurally nonzero slots. Deterministic:
    /// each block row is accumulated in storage order by a single worker.
    void matvec(std::span<const double> x, std::span<double> y) const;

    /// Dense bs x bs copy (row-major) of one stored pair block, structural
    /// zeros filled with 0; for tests, debugging and dumps.
    void materialize_block(int pair, double* dense) const;

private:
    int dim_ = 3;
    int n_nodes_ = 0;
    std::vector<int> row_ptr_, col_;
    std::vector<double> vals_;
};

/// Tangent system over the mesh: matrix, right-hand side and the map from
/// mesh nodes to free velocity unknowns. Every node keeps a full block;
/// Dirichlet-velocity nodes carry inert identity rows with zero right-hand
/// side, which solves identically to the reduced system on free unknowns.
struct BlockSystem {
    BlockSparseMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> free_velocity_slot; // compact index per node, -1 at Dirichlet-velocity nodes
    int num_free_velocity_nodes = 0;

    bool velocity_free(int node) const { return free_velocity_slot[node] >= 0; }
};

} // namespace freqstokes
