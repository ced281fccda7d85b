#pragma once

// Block-constant objects over Omega = [0,1) split into consecutive intervals.
// Block i of a partition is the i-th interval; measures are exact rationals.

#include "polyton/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace polyton {

class Partition {
public:
    Partition() = default;
    /// Throws ValidationError unless every measure is positive and they sum to 1.
    explicit Partition(std::vector<Rational> measures);

    static Partition uniform(std::size_t blocks);

    std::size_t size() const { return measures_.size(); }
    const Rational& measure(std::size_t i) const { return measures_[i]; }
    const std::vector<Rational>& measures() const { return measures_; }

    /// Right endpoints of the blocks; the last one is 1.
    std::vector<Rational> boundaries() const;

    bool operator==(const Partition& other) const { return measures_ == other.measures_; }

private:
    std::vector<Rational> measures_;
};

struct PartitionRefinement {
    Partition partition;
    /// Entry p of maps[s] is the block of input s containing refined block p.
    std::vector<std::vector<std::size_t>> maps;
};

/// Coarsest common refinement of the inputs (merge of sorted interval boundaries).
PartitionRefinement refine(std::span<const Partition* const> inputs);
PartitionRefinement refine(const Partition& a, const Partition& b);

std::vector<std::size_t> identity_map(std::size_t n);

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols, const Rational& fill = 0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    /// Throws ValidationError on ragged input.
    static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<std::vector<Rational>> to_rows() const;
    bool operator==(const RationalMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Symmetric block-constant graphon with values in [0,1].
class StepGraphon {
public:
    StepGraphon() = default;
    /// Validates: square values matching the partition, symmetric, entries in [0,1].
    StepGraphon(Partition partition, RationalMatrix values);

    static StepGraphon constant(const Rational& value);

    std::size_t size() const { return partition_.size(); }
    const Partition& partition() const { return partition_; }
    const Rational& measure(std::size_t i) const { return partition_.measure(i); }
    const RationalMatrix& values() const { return values_; }
    const Rational& value(std::size_t i, std::size_t j) const { return values_(i, j); }
    bool adjacent(std::size_t i, std::size_t j) const { return sgn(values_(i, j)) > 0; }

    /// Same function expressed on a finer partition; `map[p]` names the old block of new block p.
    StepGraphon refined(const Partition& finer, std::span<const std::size_t> map) const;

    /// Integral of W over the unit square.
    Rational edge_density() const;

    bool operator==(const StepGraphon& other) const = default;

private:
    Partition partition_;
    RationalMatrix values_;
};

/// Signed, not necessarily symmetric block-constant function on Omega^2.
class StepKernel {
public:
    StepKernel() = default;
    StepKernel(Partition rows, Partition cols, RationalMatrix values);

    static StepKernel from_graphon(const StepGraphon& w);
    static StepKernel zero(const Partition& p);

    const Partition& row_partition() const { return rows_; }
    const Partition& col_partition() const { return cols_; }
    const RationalMatrix& values() const { return values_; }
    const Rational& value(std::size_t i, std::size_t j) const { return values_(i, j); }
    std::size_t row_blocks() const { return rows_.size(); }
    std::size_t col_blocks() const { return cols_.size(); }

    StepKernel refined(const Partition& rows, std::span<const std::size_t> row_map,
                       const Partition& cols, std::span<const std::size_t> col_map) const;
    /// The same function with row and column partitions both set to their common refinement.
    StepKernel squared() const;
    bool is_square() const { return rows_ == cols_; }

    Rational integral() const;
    StepKernel transposed() const;
    StepKernel scaled(const Rational& factor) const;

    bool operator==(const StepKernel& other) const = default;

private:
    Partition rows_;
    Partition cols_;
    RationalMatrix values_;
};

/// f - g on the common refinement.
StepKernel operator-(const StepKernel& f, const StepKernel& g);
StepKernel operator+(const StepKernel& f, const StepKernel& g);

/// Block-constant function Omega -> [0,1].
class StepCover {
public:
    StepCover() = default;
    StepCover(Partition partition, std::vector<Rational> values);

    static StepCover constant(const Partition& p, const Rational& value);

    std::size_t size() const { return partition_.size(); }
    const Partition& partition() const { return partition_; }
    const Rational& measure(std::size_t i) const { return partition_.measure(i); }
    const std::vector<Rational>& values() const { return values_; }
    const Rational& value(std::size_t i) const { return values_[i]; }

    StepCover refined(const Partition& finer, std::span<const std::size_t> map) const;
    Rational integral() const;

    bool operator==(const StepCover& other) const = default;

private:
    Partition partition_;
    std::vector<Rational> values_;
};

/// How the refined blocks of a common refinement map back to each input.
struct BlockMap {
    std::vector<std::size_t> a_rows, a_cols;
    std::vector<std::size_t> b_rows, b_cols;
};

template <class T>
struct Refined {
    T a;
    T b;
    BlockMap map;
};

Refined<StepGraphon> common_refinement(const StepGraphon& a, const StepGraphon& b);
Refined<StepKernel> common_refinement(const StepKernel& a, const StepKernel& b);
Refined<StepCover> common_refinement(const StepCover& a, const StepCover& b);

/// Exact L1(Omega^2) distance between two step kernels.
Rational l1_distance(const StepKernel& f, const StepKernel& g);

}  // namespace polyton
