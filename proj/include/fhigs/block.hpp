#pragma once

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fhigs/higs.hpp"
#include "fhigs/rational_filter.hpp"
#include "fhigs/time_series.hpp"

namespace fhigs {

/// Stateful single-input single-output filter element. Blocks are stepped
/// sequentially by one owner; process() evaluates a whole trajectory and by
/// default just loops step().
class Block {
public:
    virtual ~Block() = default;
    virtual double step(double x, double dt) = 0;
    virtual void reset() = 0;
    virtual std::unique_ptr<Block> clone() const = 0;

    virtual TimeSeries process(const TimeSeries& in) {
        std::vector<double> out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = step(in.values[i], in.dt);
        return TimeSeries(in.t0, in.dt, std::move(out));
    }
};

class GainBlock final : public Block {
public:
    explicit GainBlock(double k) : k_(k) {}
    double step(double x, double) override { return k_ * x; }
    void reset() override {}
    std::unique_ptr<Block> clone() const override { return std::make_unique<GainBlock>(k_); }
    TimeSeries process(const TimeSeries& in) override {
        TimeSeries out = in;
        for (auto& v : out.values) v *= k_;
        return out;
    }

private:
    double k_;
};

class HigsBlock final : public Block {
public:
    explicit HigsBlock(HigsParams params, HigsConfig config = {})
        : filter_(params, config) {}
    double step(double x, double dt) override { return filter_.step(x, dt); }
    void reset() override { filter_.reset(); }
    std::unique_ptr<Block> clone() const override { return std::make_unique<HigsBlock>(*this); }
    TimeSeries process(const TimeSeries& in) override { return filter_.process(in); }
    const FractionalHigs& filter() const { return filter_; }

private:
    FractionalHigs filter_;
};

class RationalFilterBlock final : public Block {
public:
    explicit RationalFilterBlock(RationalFracFilter f) : filter_(std::move(f)) {
        filter_.reset();
    }
    double step(double x, double dt) override { return filter_.step(x, dt); }
    void reset() override { filter_.reset(); }
    std::unique_ptr<Block> clone() const override {
        return std::make_unique<RationalFilterBlock>(*this);
    }
    const RationalFracFilter& filter() const { return filter_; }

private:
    RationalFracFilter filter_;
};

/// (1 + s/zero) / (1 + s/pole), Tustin-discretized. zero <= 0 drops the zero
/// (plain first-order low pass).
class LeadLagBlock final : public Block {
public:
    LeadLagBlock(double zero, double pole) : zero_(zero), pole_(pole) {
        if (pole <= 0.0) throw std::invalid_argument("LeadLagBlock: pole must be > 0");
    }
    double step(double x, double dt) override {
        if (dt != dt_) {
            const double cp = 2.0 / (pole_ * dt);
            a0_ = 1.0 + cp;
            a1_ = 1.0 - cp;
            if (zero_ > 0.0) {
                const double cz = 2.0 / (zero_ * dt);
                b0_ = 1.0 + cz;
                b1_ = 1.0 - cz;
            } else {
                b0_ = b1_ = 1.0;
            }
            dt_ = dt;
        }
        const double y = (b0_ * x + b1_ * x1_ - a1_ * y1_) / a0_;
        x1_ = x;
        y1_ = y;
        return y;
    }
    void reset() override {
        x1_ = y1_ = 0.0;
        dt_ = 0.0;
    }
    std::unique_ptr<Block> clone() const override { return std::make_unique<LeadLagBlock>(*this); }

private:
    double zero_, pole_;
    double b0_ = 1.0, b1_ = 1.0, a0_ = 1.0, a1_ = 0.0;
    double x1_ = 0.0, y1_ = 0.0, dt_ = 0.0;
};

/// Trapezoidal running integral.
class IntegratorBlock final : public Block {
public:
    double step(double x, double dt) override {
        acc_ += 0.5 * dt * (x + prev_);
        prev_ = x;
        return acc_;
    }
    void reset() override { acc_ = prev_ = 0.0; }
    std::unique_ptr<Block> clone() const override {
        return std::make_unique<IntegratorBlock>(*this);
    }

private:
    double acc_ = 0.0, prev_ = 0.0;
};

class SeriesBlock final : public Block {
public:
    SeriesBlock() = default;
    SeriesBlock(const SeriesBlock& other) {
        for (const auto& b : other.blocks_) blocks_.push_back(b->clone());
    }
    SeriesBlock& operator=(const SeriesBlock&) = delete;

    void add(std::unique_ptr<Block> b) { blocks_.push_back(std::move(b)); }
    std::size_t size() const { return blocks_.size(); }
    const Block& at(std::size_t i) const { return *blocks_[i]; }

    double step(double x, double dt) override {
        for (auto& b : blocks_) x = b->step(x, dt);
        return x;
    }
    void reset() override {
        for (auto& b : blocks_) b->reset();
    }
    std::unique_ptr<Block> clone() const override { return std::make_unique<SeriesBlock>(*this); }
    TimeSeries process(const TimeSeries& in) override {
        TimeSeries s = in;
        for (auto& b : blocks_) s = b->process(s);
        return s;
    }

private:
    std::vector<std::unique_ptr<Block>> blocks_;
};

/// weight * a + (1 - weight) * b, both fed the same input.
class BlendBlock final : public Block {
public:
    BlendBlock(double weight, std::unique_ptr<Block> a, std::unique_ptr<Block> b)
        : w_(weight), a_(std::move(a)), b_(std::move(b)) {
        if (w_ < 0.0 || w_ > 1.0) throw std::invalid_argument("BlendBlock: weight in [0, 1]");
    }
    BlendBlock(const BlendBlock& other)
        : w_(other.w_), a_(other.a_->clone()), b_(other.b_->clone()) {}

    double step(double x, double dt) override {
        return w_ * a_->step(x, dt) + (1.0 - w_) * b_->step(x, dt);
    }
    void reset() override {
        a_->reset();
        b_->reset();
    }
    std::unique_ptr<Block> clone() const override { return std::make_unique<BlendBlock>(*this); }
    TimeSeries process(const TimeSeries& in) override {
        TimeSeries ya = a_->process(in);
        const TimeSeries yb = b_->process(in);
        for (std::size_t i = 0; i < ya.size(); ++i)
            ya.values[i] = w_ * ya.values[i] + (1.0 - w_) * yb.values[i];
        return ya;
    }

private:
    double w_;
    std::unique_ptr<Block> a_, b_;
};

/// x + gain * inner(x).
class ParallelUnityBlock final : public Block {
public:
    ParallelUnityBlock(double gain, std::unique_ptr<Block> inner)
        : gain_(gain), inner_(std::move(inner)) {}
    ParallelUnityBlock(const ParallelUnityBlock& other)
        : gain_(other.gain_), inner_(other.inner_->clone()) {}

    double step(double x, double dt) override { return x + gain_ * inner_->step(x, dt); }
    void reset() override { inner_->reset(); }
    std::unique_ptr<Block> clone() const override {
        return std::make_unique<ParallelUnityBlock>(*this);
    }
    TimeSeries process(const TimeSeries& in) override {
        TimeSeries y = inner_->process(in);
        for (std::size_t i = 0; i < y.size(); ++i)
            y.values[i] = in.values[i] + gain_ * y.values[i];
        return y;
    }

private:
    double gain_;
    std::unique_ptr<Block> inner_;
};

}  // namespace fhigs
