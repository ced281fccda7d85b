#include "polyton/step.hpp"

#include "polyton/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace polyton {

Partition::Partition(std::vector<Rational> measures) : measures_(std::move(measures))
{
    if (measures_.empty()) throw ValidationError("partition must have at least one block");
    Rational total = 0;
    for (std::size_t i = 0; i < measures_.size(); ++i) {
        if (sgn(measures_[i]) <= 0)
            throw ValidationError("block measure must be positive (block " + std::to_string(i) +
                                  " has " + to_string(measures_[i]) + ")");
        total += measures_[i];
    }
    if (total != 1)
        throw ValidationError("block measures must sum to 1 (sum is " + to_string(total) + ")");
}

Partition Partition::uniform(std::size_t blocks)
{
    if (blocks == 0) throw ValidationError("partition must have at least one block");
    return Partition(std::vector<Rational>(blocks, Rational(1, blocks)));
}

std::vector<Rational> Partition::boundaries() const
{
    std::vector<Rational> out;
    out.reserve(measures_.size());
    Rational acc = 0;
    for (const auto& m : measures_) {
        acc += m;
        out.push_back(acc);
    }
    return out;
}

PartitionRefinement refine(std::span<const Partition* const> inputs)
{
    std::vector<Rational> cuts;
    for (const Partition* p : inputs)
        for (auto& b : p->boundaries()) cuts.push_back(std::move(b));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Rational> measures;
    measures.reserve(cuts.size());
    Rational prev = 0;
    for (const auto& c : cuts) {
        measures.push_back(c - prev);
        prev = c;
    }

    PartitionRefinement out;
    out.maps.resize(inputs.size());
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        const auto bounds = inputs[s]->boundaries();
        auto& map = out.maps[s];
        map.reserve(cuts.size());
        std::size_t block = 0;
        for (const auto& c : cuts) {
            while (bounds[block] < c) ++block;
            map.push_back(block);
        }
    }
    out.partition = Partition(std::move(measures));
    return out;
}

PartitionRefinement refine(const Partition& a, const Partition& b)
{
    const Partition* inputs[] = {&a, &b};
    return refine(std::span<const Partition* const>(inputs));
}

std::vector<std::size_t> identity_map(std::size_t n)
{
    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    return map;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    RationalMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            throw ValidationError("values must be a rectangular matrix (row " + std::to_string(i) +
                                  " has " + std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(c) + ")");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<Rational>> RationalMatrix::to_rows() const
{
    std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
}

// ---------------------------------------------------------------------------

StepGraphon::StepGraphon(Partition partition, RationalMatrix values)
    : partition_(std::move(partition)), values_(std::move(values))
{
    const std::size_t k = partition_.size();
    if (values_.rows() != k || values_.cols() != k)
        throw ValidationError("values must be a " + std::to_string(k) + "x" + std::to_string(k) +
                              " matrix to match the block measures");
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto& v = values_(i, j);
            if (sgn(v) < 0 || v > 1)
                throw ValidationError("graphon values must lie in [0,1] (entry [" + std::to_string(i) +
                                      "][" + std::to_string(j) + "] is " + to_string(v) + ")");
            if (v != values_(j, i))
                throw ValidationError("graphon values must be symmetric (entries [" + std::to_string(i) +
                                      "][" + std::to_string(j) + "] and [" + std::to_string(j) + "][" +
                                      std::to_string(i) + "] differ)");
        }
    }
}

StepGraphon StepGraphon::constant(const Rational& value)
{
    return StepGraphon(Partition::uniform(1), RationalMatrix(1, 1, value));
}

StepGraphon StepGraphon::refined(const Partition& finer, std::span<const std::size_t> map) const
{
    const std::size_t k = finer.size();
    RationalMatrix v(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) v(i, j) = values_(map[i], map[j]);
    return StepGraphon(finer, std::move(v));
}

Rational StepGraphon::edge_density() const
{
    Rational total = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) total += measure(i) * measure(j) * values_(i, j);
    return total;
}

// ---------------------------------------------------------------------------

StepKernel::StepKernel(Partition rows, Partition cols, RationalMatrix values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values))
{
    if (values_.rows() != rows_.size() || values_.cols() != cols_.size())
        throw ValidationError("kernel values must be a " + std::to_string(rows_.size()) + "x" +
                              std::to_string(cols_.size()) + " matrix to match the row/column measures");
}

StepKernel StepKernel::from_graphon(const StepGraphon& w)
{
    return StepKernel(w.partition(), w.partition(), w.values());
}

StepKernel StepKernel::zero(const Partition& p)
{
    return StepKernel(p, p, RationalMatrix(p.size(), p.size()));
}

StepKernel StepKernel::refined(const Partition& rows, std::span<const std::size_t> row_map,
                               const Partition& cols, std::span<const std::size_t> col_map) const
{
    RationalMatrix v(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) v(i, j) = values_(row_map[i], col_map[j]);
    return StepKernel(rows, cols, std::move(v));
}

StepKernel StepKernel::squared() const
{
    if (is_square()) return *this;
    auto r = refine(rows_, cols_);
    return refined(r.partition, r.maps[0], r.partition, r.maps[1]);
}

Rational StepKernel::integral() const
{
    Rational total = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < cols_.size(); ++j)
            total += rows_.measure(i) * cols_.measure(j) * values_(i, j);
    return total;
}

StepKernel StepKernel::transposed() const
{
    RationalMatrix v(cols_.size(), rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < cols_.size(); ++j) v(j, i) = values_(i, j);
    return StepKernel(cols_, rows_, std::move(v));
}

StepKernel StepKernel::scaled(const Rational& factor) const
{
    RationalMatrix v = values_;
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) *= factor;
    return StepKernel(rows_, cols_, std::move(v));
}

namespace {

template <class Op>
StepKernel combine(const StepKernel& f, const StepKernel& g, Op op)
{
    auto r = common_refinement(f, g);
    RationalMatrix v(r.a.row_blocks(), r.a.col_blocks());
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) = op(r.a.value(i, j), r.b.value(i, j));
    return StepKernel(r.a.row_partition(), r.a.col_partition(), std::move(v));
}

}  // namespace

StepKernel operator-(const StepKernel& f, const StepKernel& g)
{
    return combine(f, g, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

StepKernel operator+(const StepKernel& f, const StepKernel& g)
{
    return combine(f, g, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

// ---------------------------------------------------------------------------

StepCover::StepCover(Partition partition, std::vector<Rational> values)
    : partition_(std::move(partition)), values_(std::move(values))
{
    if (values_.size() != partition_.size())
        throw ValidationError("cover must have one value per block (" + std::to_string(partition_.size()) +
                              " blocks, " + std::to_string(values_.size()) + " values)");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (sgn(values_[i]) < 0 || values_[i] > 1)
            throw ValidationError("cover values must lie in [0,1] (block " + std::to_string(i) + " has " +
                                  to_string(values_[i]) + ")");
}

StepCover StepCover::constant(const Partition& p, const Rational& value)
{
    return StepCover(p, std::vector<Rational>(p.size(), value));
}

StepCover StepCover::refined(const Partition& finer, std::span<const std::size_t> map) const
{
    std::vector<Rational> v(finer.size());
    for (std::size_t i = 0; i < finer.size(); ++i) v[i] = values_[map[i]];
    return StepCover(finer, std::move(v));
}

Rational StepCover::integral() const
{
    Rational total = 0;
    for (std::size_t i = 0; i < size(); ++i) total += measure(i) * values_[i];
    return total;
}

// ---------------------------------------------------------------------------

Refined<StepGraphon> common_refinement(const StepGraphon& a, const StepGraphon& b)
{
    if (a.partition() == b.partition()) {
        auto id = identity_map(a.size());
        return {a, b, {id, id, id, id}};
    }
    auto r = refine(a.partition(), b.partition());
    return {a.refined(r.partition, r.maps[0]), b.refined(r.partition, r.maps[1]),
            {r.maps[0], r.maps[0], r.maps[1], r.maps[1]}};
}

Refined<StepKernel> common_refinement(const StepKernel& a, const StepKernel& b)
{
    auto rows = refine(a.row_partition(), b.row_partition());
    auto cols = refine(a.col_partition(), b.col_partition());
    return {a.refined(rows.partition, rows.maps[0], cols.partition, cols.maps[0]),
            b.refined(rows.partition, rows.maps[1], cols.partition, cols.maps[1]),
            {rows.maps[0], cols.maps[0], rows.maps[1], cols.maps[1]}};
}

Refined<StepCover> common_refinement(const StepCover& a, const StepCover& b)
{
    auto r = refine(a.partition(), b.partition());
    return {a.refined(r.partition, r.maps[0]), b.refined(r.partition, r.maps[1]),
            {r.maps[0], r.maps[0], r.maps[1], r.maps[1]}};
}

Rational l1_distance(const StepKernel& f, const StepKernel& g)
{
    auto r = common_refinement(f, g);
    const auto& rows = r.a.row_partition();
    const auto& cols = r.a.col_partition();
    Rational total = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            total += rows.measure(i) * cols.measure(j) * abs(Rational(r.a.value(i, j) - r.b.value(i, j)));
    return total;
}

}  // namespace polyton
