#ifndef DNAJSCC_TRAINER_HPP
#define DNAJSCC_TRAINER_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/bio.hpp"
#include "dnajscc/channel.hpp"
#include "dnajscc/image.hpp"
#include "dnajscc/model.hpp"
#include "dnajscc/objective.hpp"
#include "dnajscc/optimizer.hpp"
#include "dnajscc/preprocess.hpp"

namespace dnajscc {

namespace detail {
inline constexpr std::uint64_t kTrainSampleTag = 0x5A3B1E;
inline constexpr std::uint64_t kTrainChannelTag = 0xC4A22;
} // namespace detail

// The differentiable section between the encoder's raw activations and the
// scalar loss. The channel realization is sampled once per step and then held
// fixed, so the remaining computation is a deterministic function that both
// the optimizer and finite-difference checks can differentiate.
//
// Quantization is handled with a straight-through estimator: the forward pass
// feeds rounded bases through the channel while the backward pass treats
// rounding as the identity. With `surrogate_quantizer` set, rounding is
// skipped in the forward pass too, which makes finite differences of the
// composite match the analytic gradient.
class TrainingPipeline {
  public:
    TrainingPipeline(CodecModel& model, double alpha) : model_(model), alpha_(alpha) {}

    bool surrogate_quantizer = false;
    bool training = true; // batch norm mode for the decoder pass

    struct Forward {
        Tensor a;        // pre-quantization activations (N, k)
        Tensor z_soft;   // 3*sigmoid(a)
        Tensor z_loss;   // values seen by channel and constraint loss
        std::vector<NucleotideSequence> bases;
        Tensor u;        // decoder input (N, v, K)
        Tensor xhat;     // reconstruction (N, 3, 32, 32)
        LossBreakdown loss;
    };

    std::vector<std::vector<IdsPattern>> sample_patterns(
        const std::vector<NucleotideSequence>& bases, const ChannelConfig& chan,
        std::uint64_t step_key) const {
        std::vector<std::vector<IdsPattern>> patterns(bases.size());
        for (std::size_t n = 0; n < bases.size(); ++n) {
            const std::uint64_t key = derive_key(step_key, {static_cast<std::uint64_t>(n)});
            patterns[n].reserve(static_cast<std::size_t>(chan.v));
            for (int j = 0; j < chan.v; ++j)
                patterns[n].push_back(
                    realize_copy(bases[n], chan, key, static_cast<std::uint32_t>(j)));
        }
        return patterns;
    }

    Forward forward_from_activations(const Tensor& a, const Tensor& x,
                                     const std::vector<std::vector<IdsPattern>>& patterns) {
        const int n = a.shape[0];
        const int k = model_.config().k();
        const int v = model_.config().v;
        const int K = compute_K(k);

        Forward f;
        f.a = a;
        NucleotideMapper::Output mapped = model_.mapper().forward(a);
        f.z_soft = std::move(mapped.soft);
        f.bases = std::move(mapped.bases);

        if (surrogate_quantizer) {
            f.z_loss = f.z_soft;
        } else {
            f.z_loss = Tensor(a.shape);
            for (int b = 0; b < n; ++b)
                for (int t = 0; t < k; ++t)
                    f.z_loss.at2(b, t) = static_cast<double>(f.bases[static_cast<std::size_t>(b)]
                                                                 [static_cast<std::size_t>(t)]);
        }

        // Received copies, padded to K and scaled exactly as the inference
        // preprocessor does: symbol (base + 1) / 4, padding 0.
        f.u = Tensor({n, v, K});
        for (int b = 0; b < n; ++b) {
            for (int j = 0; j < v; ++j) {
                const IdsPattern& pat = patterns[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
                const int filled = std::min<int>(K, static_cast<int>(pat.slots.size()));
                for (int t = 0; t < filled; ++t) {
                    const SlotRef& slot = pat.slots[static_cast<std::size_t>(t)];
                    const double val = slot.src >= 0 ? f.z_loss.at2(b, slot.src)
                                                     : static_cast<double>(slot.literal);
                    f.u.data[(static_cast<std::size_t>(b) * v + static_cast<std::size_t>(j)) * K +
                             static_cast<std::size_t>(t)] = (val + 1.0) / 4.0;
                }
            }
        }

        f.xhat = model_.decoder().forward(f.u, training);
        f.loss = total_loss(x, f.xhat, f.z_loss, alpha_, model_.config().d);
        return f;
    }

    // Returns d(loss)/d(a) and accumulates decoder parameter gradients.
    Tensor backward_to_activations(const Forward& f, const Tensor& x,
                                   const std::vector<std::vector<IdsPattern>>& patterns) {
        const int n = f.a.shape[0];
        const int v = model_.config().v;
        const int K = f.u.shape[2];

        const Tensor du = model_.decoder().backward(l_rq_grad(x, f.xhat));

        Tensor dz(f.a.shape);
        for (int b = 0; b < n; ++b) {
            for (int j = 0; j < v; ++j) {
                const IdsPattern& pat = patterns[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
                const int filled = std::min<int>(K, static_cast<int>(pat.slots.size()));
                for (int t = 0; t < filled; ++t) {
                    const SlotRef& slot = pat.slots[static_cast<std::size_t>(t)];
                    if (slot.src >= 0)
                        dz.at2(b, slot.src) +=
                            du.data[(static_cast<std::size_t>(b) * v + static_cast<std::size_t>(j)) * K +
                                    static_cast<std::size_t>(t)] /
                            4.0;
                }
            }
        }

        const Tensor dbc = l_bc_grad(f.z_loss, model_.config().d);
        for (std::size_t i = 0; i < dz.data.size(); ++i) dz.data[i] += alpha_ * dbc.data[i];

        // Straight-through: d(round)/dz treated as 1, then the sigmoid chain.
        return model_.mapper().backward(dz);
    }

  private:
    CodecModel& model_;
    double alpha_;
};

struct TrainConfig {
    SystemConfig sys;
    int iterations = 50000;
    int batch_size = 64;
    double lr_initial = 5e-3;
    double lr_final = 5e-4;
    int log_every = 100;
    std::string metrics_path; // CSV, empty disables logging
};

struct StepStats {
    std::uint64_t iteration = 0;
    double lr = 0.0;
    LossBreakdown loss;
    double gc = 0.0;
    double frac_long_runs = 0.0;
};

// End-to-end trainer: sample a batch, encode, corrupt, decode, score,
// backpropagate, Adam update. Deterministic in (seed, dataset order).
class Trainer {
  public:
    Trainer(CodecModel& model, const TrainConfig& cfg)
        : model_(model), cfg_(cfg), pipeline_(model, cfg.sys.alpha),
          opt_(model.params()) {
        if (cfg_.batch_size < 1) throw std::invalid_argument("Trainer: batch_size must be >= 1");
        if (cfg_.iterations < 1) throw std::invalid_argument("Trainer: iterations must be >= 1");
        if (!cfg_.metrics_path.empty()) {
            log_.open(cfg_.metrics_path);
            if (!log_) throw std::runtime_error("Trainer: cannot open metrics log " + cfg_.metrics_path);
            log_ << "iteration,lr,loss,loss_rq,loss_bc,gc,frac_long_runs\n";
        }
    }

    StepStats step(const std::vector<ImageTensor>& dataset, std::uint64_t iteration) {
        if (dataset.empty()) throw std::invalid_argument("Trainer: empty dataset");

        // Batch selection from its own sub-stream.
        std::vector<const ImageTensor*> batch;
        {
            auto rng = make_rng(derive_key(cfg_.sys.seed, {detail::kTrainSampleTag, iteration}));
            std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
            batch.reserve(static_cast<std::size_t>(cfg_.batch_size));
            for (int i = 0; i < cfg_.batch_size; ++i) batch.push_back(&dataset[pick(rng)]);
        }
        const Tensor x = normalize_batch(batch);

        const Tensor a = model_.encoder().forward(x, /*training=*/true);
        NucleotideMapper::Output mapped = model_.mapper().forward(a);

        ChannelConfig chan;
        chan.gamma = cfg_.sys.gamma_train;
        chan.v = cfg_.sys.v;
        chan.s = cfg_.sys.s;
        chan.seed = cfg_.sys.seed;
        const auto patterns = pipeline_.sample_patterns(
            mapped.bases, chan, derive_key(cfg_.sys.seed, {detail::kTrainChannelTag, iteration}));

        TrainingPipeline::Forward f = pipeline_.forward_from_activations(a, x, patterns);
        if (!std::isfinite(f.loss.total))
            throw std::runtime_error("Trainer: non-finite loss at iteration " +
                                     std::to_string(iteration));

        opt_.zero_grad();
        const Tensor da = pipeline_.backward_to_activations(f, x, patterns);
        model_.encoder().backward(da);

        const double lr = lr_schedule(iteration, static_cast<std::uint64_t>(cfg_.iterations),
                                      cfg_.lr_initial, cfg_.lr_final);
        opt_.step(lr);

        StepStats stats;
        stats.iteration = iteration;
        stats.lr = lr;
        stats.loss = f.loss;
        RunStats runs;
        for (const NucleotideSequence& seq : f.bases) runs.accumulate(seq);
        stats.gc = runs.gc_fraction();
        stats.frac_long_runs = runs.frac_in_runs_longer_than(kMaxDesirableRun);

        if (log_.is_open() &&
            (iteration % static_cast<std::uint64_t>(cfg_.log_every) == 0 ||
             iteration + 1 == static_cast<std::uint64_t>(cfg_.iterations))) {
            log_ << stats.iteration << ',' << stats.lr << ',' << stats.loss.total << ','
                 << stats.loss.reconstruction << ',' << stats.loss.constraint << ',' << stats.gc
                 << ',' << stats.frac_long_runs << '\n';
            log_.flush();
        }
        return stats;
    }

    template <typename Callback>
    StepStats run(const std::vector<ImageTensor>& dataset, Callback&& on_step) {
        StepStats last;
        for (std::uint64_t it = 0; it < static_cast<std::uint64_t>(cfg_.iterations); ++it) {
            last = step(dataset, it);
            on_step(last);
        }
        return last;
    }

    StepStats run(const std::vector<ImageTensor>& dataset) {
        return run(dataset, [](const StepStats&) {});
    }

  private:
    CodecModel& model_;
    TrainConfig cfg_;
    TrainingPipeline pipeline_;
    Adam opt_;
    std::ofstream log_;
};

} // namespace dnajscc

#endif
