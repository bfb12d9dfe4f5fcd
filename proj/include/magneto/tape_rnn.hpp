#pragma once

#include "magneto/audio.hpp"
#include "magneto/nn/checkpoint.hpp"
#include "magneto/nn/gru.hpp"
#include "magneto/nn/params.hpp"
#include "magneto/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace magneto {

inline constexpr const char* kTapeRnnArch = "tape-rnn-v1";

struct TapeRnnConfig {
    int hidden_size = 64;
    int tbptt_chunk = 2048;
    int chunks_per_segment = 4;
    double lr = 1e-3;
    int batch = 32;
    int max_epochs = 200;
    double max_wall_seconds = 1800.0;
    double target_val_esr = 0.0; // stop early once val loss falls below (0 = off)
    double grad_clip = 10.0;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class TrainingScheme { SupervisedI, SupervisedII };

// Supervised I initializes state for a fixed 1024 steps; Supervised II takes
// the next power of two of the maximum delay so the line is filled with real
// values before gradients are tracked.
std::size_t warmup_length(TrainingScheme scheme, double max_delay_samples);

/// GRU (input 1) + linear output head. Plain projection, no residual.
template <typename T>
struct TapeRnnModel {
    int hidden = 64;
    nn::ParamStore<T> params;
    nn::GruCell<T> cell;
    const T* w_out = nullptr;
    const T* b_out = nullptr;

    void build(int hidden_size, std::uint64_t seed);
    void bind();

    // Stateful forward; h carries across calls (size hidden, zero-init by
    // caller). Appends per-step caches and hidden states when given.
    void forward(const T* x, std::size_t n, std::vector<T>& h, T* y,
                 std::vector<typename nn::GruCell<T>::Cache>* caches = nullptr,
                 std::vector<T>* h_trace = nullptr) const;
};

template <typename T>
struct TapeRnnGrads {
    nn::ParamStore<T> store;
    typename nn::GruCell<T>::Grads cell;
    T* w_out = nullptr;
    T* b_out = nullptr;

    explicit TapeRnnGrads(const TapeRnnModel<T>& model) : store(model.params.like()) {
        cell.bind(store, "gru");
        w_out = store.at("out.w").data();
        b_out = store.at("out.b").data();
    }
};

// Backward through one TBPTT chunk. dy is dL/d(output) per step; dh holds
// dL/dh at the final step on entry (typically zero at a truncation boundary)
// and dL/dh before the chunk on exit. h_trace is the forward hidden
// trajectory (n+1 rows including the entry state).
template <typename T>
void rnn_backward_chunk(const TapeRnnModel<T>& model,
                        const std::vector<typename nn::GruCell<T>::Cache>& caches,
                        const std::vector<T>& h_trace, const T* dy, std::size_t n,
                        TapeRnnGrads<T>& grads, std::vector<T>& dh);

// Sum((t-p)^2)/Sum(t^2) over the chunk plus its gradient w.r.t. pred scaled
// by `grad_scale`. Returns the loss; dpred is overwritten.
template <typename T>
T esr_with_grad(const T* pred, const T* target, std::size_t n, T* dpred, T grad_scale);

// pred[i] = interpolated hist[i - tau_abs[i]] for i in [i0, i1), absolute
// indices into hist (the RNN output history for the whole segment).
template <typename T>
void delayed_prediction(const std::vector<T>& hist, const std::vector<double>& tau_abs,
                        std::size_t i0, std::size_t i1, T* pred);

// Adjoint of delayed_prediction; contributions to history positions before
// trunc_start are dropped (TBPTT truncation).
template <typename T>
void delayed_prediction_backward(const std::vector<double>& tau_abs, std::size_t i0,
                                 std::size_t i1, const T* dpred, std::vector<T>& dhist,
                                 std::size_t trunc_start);

nn::Checkpoint tape_rnn_to_checkpoint(const TapeRnnModel<float>& model,
                                      const nlohmann::json& extra_meta);
void tape_rnn_from_checkpoint(const nn::Checkpoint& ckpt, TapeRnnModel<float>& model);

// Full inference chain: nonlinearity, optional time-varying delay, optional
// additive noise.
std::vector<float> tape_rnn_infer(const nn::Checkpoint& ckpt, const std::vector<float>& x,
                                  const DelayTrajectory* traj = nullptr,
                                  const std::vector<float>* noise = nullptr);

// ---- training ----

struct TapeFile {
    std::vector<float> input;        // program (left channel)
    std::vector<float> target;       // processed program (left channel)
    std::vector<double> tau;         // per-sample delay, empty when timing is off
    std::vector<float> target_demod; // demod(target, tau); = target when tau empty
};

struct TapeDataset {
    std::vector<TapeFile> train, val, test;
    double max_delay = 0.0;
    int sample_rate = 44100;
};

// Loads a generated dataset from its manifest.lock.json. Trajectories are
// measured from the pulse channels (input right vs target right), matching
// the capture pipeline; set measure_tau=false to use the stored CSVs.
TapeDataset load_tape_dataset(const std::string& lock_path, bool measure_tau = true);

struct TrainLogRow {
    int epoch;
    double train_loss;
    double val_loss;
    double lr;
};

struct TapeRnnTrainResult {
    nn::Checkpoint best;
    std::vector<TrainLogRow> log;
    double best_val_loss = 0.0;
    std::size_t warmup = 0;
    int epochs_run = 0;
};

TapeRnnTrainResult train_tape_rnn(const TapeDataset& data, const TapeRnnConfig& cfg,
                                  TrainingScheme scheme,
                                  const std::string& resume_path = {},
                                  const std::string& periodic_save_path = {});

// Evaluation duality: "delayed" applies tau to the prediction, "demod"
// compares the raw prediction against the demodulated target.
struct EvalModes {
    double esr_delayed = 0.0;
    double esr_demod = 0.0;
};
EvalModes evaluate_tape_rnn(const nn::Checkpoint& ckpt, const std::vector<TapeFile>& files);

extern template struct TapeRnnModel<float>;
extern template struct TapeRnnModel<double>;

} // namespace magneto
