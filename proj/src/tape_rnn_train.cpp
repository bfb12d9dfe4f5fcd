#include "magneto/tape_rnn.hpp"

#include "magneto/config_json.hpp"
#include "magneto/delay_line.hpp"
#include "magneto/errors.hpp"
#include "magneto/nn/optim.hpp"
#include "magneto/pulse.hpp"
#include "magneto/threading.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <omp.h>

namespace magneto {

namespace {

std::vector<double> measure_tau_per_sample(const AudioBuffer& input, const AudioBuffer& target,
                                           double pulse_rate) {
    PulseTrainSpec spec;
    spec.pulse_rate_hz = pulse_rate;
    spec.sample_rate = input.sample_rate;
    spec.duration_s = double(input.length()) / input.sample_rate;
    const auto in_det = detect_pulses(input.ch(1), spec, 0.5);
    const auto out_det = detect_pulses(target.ch(1), spec, 0.1);
    const DelayTrajectory traj = extract_trajectory(in_det, out_det, spec);
    return upsample_trajectory(traj, input.sample_rate, input.length());
}

TapeFile load_tape_file(const std::string& root, const nlohmann::json& entry,
                        bool measure_tau, double pulse_rate) {
    namespace fs = std::filesystem;
    const AudioBuffer input = read_wav((fs::path(root) / entry.at("input").get<std::string>()).string());
    const AudioBuffer target = read_wav((fs::path(root) / entry.at("target").get<std::string>()).string());
    if (input.length() != target.length())
        throw IoError("dataset: input/target length mismatch");

    TapeFile f;
    f.input = input.ch(0);
    f.target = target.ch(0);
    if (entry.contains("trajectory")) {
        if (measure_tau && input.num_channels() == 2 && target.num_channels() == 2) {
            f.tau = measure_tau_per_sample(input, target, pulse_rate);
        } else {
            const DelayTrajectory traj = read_trajectory_csv(
                (fs::path(root) / entry.at("trajectory").get<std::string>()).string());
            f.tau = upsample_trajectory(traj, input.sample_rate, input.length());
        }
        f.target_demod = demodulate(f.target, f.tau);
    } else {
        f.target_demod = f.target;
    }
    return f;
}

} // namespace

TapeDataset load_tape_dataset(const std::string& lock_path, bool measure_tau) {
    const nlohmann::json lock = load_json_file(lock_path);
    const std::string root = std::filesystem::path(lock_path).parent_path().string();
    const double pulse_rate =
        lock.at("manifest").at("oracle_config").value("pulse_rate_hz", 100.0);

    TapeDataset data;
    data.sample_rate = lock.at("manifest").value("sample_rate", 44100);
    for (const auto& entry : lock.at("files")) {
        const std::string split = entry.at("split").get<std::string>();
        TapeFile f = load_tape_file(root, entry, measure_tau, pulse_rate);
        for (double d : f.tau) data.max_delay = std::max(data.max_delay, d);
        if (split == "train") data.train.push_back(std::move(f));
        else if (split == "val") data.val.push_back(std::move(f));
        else data.test.push_back(std::move(f));
    }
    if (data.train.empty()) throw ConfigError("dataset: no training files");
    if (data.val.empty()) throw ConfigError("dataset: no validation files");
    return data;
}

namespace {

// Scheme loss over one whole file minus the warmup region; pooled sums.
void file_eval_sums(const TapeRnnModel<float>& model, const TapeFile& f, std::size_t warmup,
                    TrainingScheme scheme, double& num, double& den) {
    std::vector<float> h(std::size_t(model.hidden), 0.0f);
    std::vector<float> out(f.input.size());
    model.forward(f.input.data(), f.input.size(), h, out.data());

    const std::size_t n = f.input.size();
    if (n <= warmup) return;

    std::vector<float> pred;
    const float* target = nullptr;
    if (scheme == TrainingScheme::SupervisedI) {
        pred.assign(out.begin() + std::ptrdiff_t(warmup), out.end());
        target = f.target_demod.data() + warmup;
    } else {
        pred.resize(n - warmup);
        if (!f.tau.empty()) {
            delayed_prediction(out, f.tau, warmup, n, pred.data());
        } else {
            std::copy(out.begin() + std::ptrdiff_t(warmup), out.end(), pred.begin());
        }
        target = f.target.data() + warmup;
    }
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = double(target[i]) - double(pred[i]);
        num += e * e;
        den += double(target[i]) * double(target[i]);
    }
}

double scheme_loss(const TapeRnnModel<float>& model, const std::vector<TapeFile>& files,
                   std::size_t warmup, TrainingScheme scheme) {
    double num = 0.0, den = 0.0;
    for (const auto& f : files) file_eval_sums(model, f, warmup, scheme, num, den);
    if (den <= 0.0) throw TrainError("evaluation: silent targets");
    return num / den;
}

struct ItemState {
    std::size_t file = 0;
    std::size_t start = 0;
    std::vector<float> h;
    std::vector<float> hist;     // RNN outputs over the segment, local indices
    std::vector<double> tau_loc; // per-sample delay over the segment
};

} // namespace

TapeRnnTrainResult train_tape_rnn(const TapeDataset& data, const TapeRnnConfig& cfg,
                                  TrainingScheme scheme, const std::string& resume_path,
                                  const std::string& periodic_save_path) {
    cfg.validate();
    init_threading();
    const auto t_start = std::chrono::steady_clock::now();

    const std::size_t warmup = warmup_length(scheme, data.max_delay);
    const std::size_t chunk = std::size_t(cfg.tbptt_chunk);
    const std::size_t span = warmup + std::size_t(cfg.chunks_per_segment) * chunk;

    for (const auto& f : data.train)
        if (f.input.size() < span + 1)
            throw ConfigError("train: files shorter than warmup + TBPTT span");

    TapeRnnModel<float> model;
    model.build(cfg.hidden_size, cfg.seed);
    nn::Adam<float> adam(model.params, cfg.lr);
    nn::PlateauScheduler plateau;
    int start_epoch = 0;
    double best_val = 1e300;

    if (!resume_path.empty() && std::filesystem::exists(resume_path)) {
        const nn::Checkpoint resume = nn::load_checkpoint(resume_path);
        tape_rnn_from_checkpoint(resume, model);
        adam = nn::Adam<float>(model.params, resume.meta.value("lr", cfg.lr));
        for (auto& e : adam.moments_m().entries())
            if (resume.params.contains("adam.m." + e.name))
                e.values = resume.params.at("adam.m." + e.name);
        for (auto& e : adam.moments_v().entries())
            if (resume.params.contains("adam.v." + e.name))
                e.values = resume.params.at("adam.v." + e.name);
        adam.set_step_count(resume.meta.value("adam_step", 0L));
        start_epoch = resume.meta.value("epoch", 0);
        best_val = resume.meta.value("best_val", 1e300);
        plateau.best_loss = resume.meta.value("plateau_best", 1e300);
        plateau.epochs_since_improve = resume.meta.value("plateau_count", 0);
    }

    std::size_t total_train = 0;
    for (const auto& f : data.train) total_train += f.input.size();
    const std::size_t batch_span = std::size_t(cfg.batch) * std::size_t(cfg.chunks_per_segment) * chunk;
    const int batches_per_epoch = int(std::max<std::size_t>(1, total_train / batch_span));

    const int B = cfg.batch;
    std::vector<ItemState> items(std::size_t(B));
    std::vector<TapeRnnGrads<float>> item_grads;
    item_grads.reserve(std::size_t(B));
    for (int b = 0; b < B; ++b) item_grads.emplace_back(model);
    TapeRnnGrads<float> batch_grads(model);

    TapeRnnTrainResult result;
    result.warmup = warmup;
    nn::Checkpoint best_ckpt;
    bool have_best = false;

    for (int epoch = start_epoch; epoch < cfg.max_epochs; ++epoch) {
        Rng epoch_rng(derive_seed(cfg.seed, 0xe90c, std::uint64_t(epoch)));
        double epoch_loss = 0.0;
        std::size_t epoch_chunks = 0;

        for (int batch_i = 0; batch_i < batches_per_epoch; ++batch_i) {
            // draw segments and run warmups
            for (int b = 0; b < B; ++b) {
                auto& it = items[std::size_t(b)];
                it.file = std::size_t(epoch_rng.below(data.train.size()));
                const auto& f = data.train[it.file];
                it.start = std::size_t(epoch_rng.below(f.input.size() - span));
                it.h.assign(std::size_t(cfg.hidden_size), 0.0f);
                it.hist.assign(span, 0.0f);
                it.tau_loc.resize(span);
                if (!f.tau.empty())
                    std::copy(f.tau.begin() + std::ptrdiff_t(it.start),
                              f.tau.begin() + std::ptrdiff_t(it.start + span),
                              it.tau_loc.begin());
                else
                    std::fill(it.tau_loc.begin(), it.tau_loc.end(), 0.0);
            }

#pragma omp parallel for schedule(static)
            for (int b = 0; b < B; ++b) {
                auto& it = items[std::size_t(b)];
                const auto& f = data.train[it.file];
                model.forward(f.input.data() + it.start, warmup, it.h, it.hist.data());
            }

            for (int k = 0; k < cfg.chunks_per_segment; ++k) {
                const std::size_t i0 = warmup + std::size_t(k) * chunk;
                const std::size_t i1 = i0 + chunk;
                double chunk_loss_sum = 0.0;

#pragma omp parallel for schedule(static) reduction(+ : chunk_loss_sum)
                for (int b = 0; b < B; ++b) {
                    auto& it = items[std::size_t(b)];
                    const auto& f = data.train[it.file];
                    std::vector<nn::GruCell<float>::Cache> caches;
                    caches.reserve(chunk);
                    std::vector<float> h_trace;
                    h_trace.reserve((chunk + 1) * std::size_t(cfg.hidden_size));
                    model.forward(f.input.data() + it.start + i0, chunk, it.h,
                                  it.hist.data() + i0, &caches, &h_trace);

                    std::vector<float> pred(chunk);
                    std::vector<float> dpred(chunk);
                    const float* target;
                    if (scheme == TrainingScheme::SupervisedI) {
                        std::copy(it.hist.begin() + std::ptrdiff_t(i0),
                                  it.hist.begin() + std::ptrdiff_t(i1), pred.begin());
                        target = f.target_demod.data() + it.start + i0;
                    } else {
                        delayed_prediction(it.hist, it.tau_loc, i0, i1, pred.data());
                        target = f.target.data() + it.start + i0;
                    }
                    const float loss = esr_with_grad(pred.data(), target, chunk, dpred.data(),
                                                     float(1.0 / B));
                    chunk_loss_sum += double(loss);

                    std::vector<float> dy(chunk, 0.0f);
                    if (scheme == TrainingScheme::SupervisedI) {
                        dy = dpred;
                    } else {
                        std::vector<float> dhist(span, 0.0f);
                        delayed_prediction_backward(it.tau_loc, i0, i1, dpred.data(), dhist,
                                                    i0);
                        std::copy(dhist.begin() + std::ptrdiff_t(i0),
                                  dhist.begin() + std::ptrdiff_t(i1), dy.begin());
                    }
                    std::vector<float> dh(std::size_t(cfg.hidden_size), 0.0f);
                    item_grads[std::size_t(b)].store.zero();
                    rnn_backward_chunk(model, caches, h_trace, dy.data(), chunk,
                                       item_grads[std::size_t(b)], dh);
                }

                batch_grads.store.zero();
                for (int b = 0; b < B; ++b)
                    batch_grads.store.accumulate(item_grads[std::size_t(b)].store);
                nn::clip_grad_norm(batch_grads.store, cfg.grad_clip);
                adam.step(model.params, batch_grads.store);
                model.bind(); // data pointers unchanged, cheap and explicit

                epoch_loss += chunk_loss_sum / B;
                ++epoch_chunks;
            }
        }

        const double train_loss = epoch_loss / double(std::max<std::size_t>(1, epoch_chunks));
        const double val_loss = scheme_loss(model, data.val, warmup, scheme);
        const double new_lr = plateau.step(val_loss, adam.learning_rate());
        adam.set_learning_rate(new_lr);

        result.log.push_back({epoch, train_loss, val_loss, adam.learning_rate()});

        if (val_loss < best_val) {
            best_val = val_loss;
            nlohmann::json meta;
            meta["scheme"] = scheme == TrainingScheme::SupervisedI ? "supervised1" : "supervised2";
            meta["warmup"] = warmup;
            meta["seed"] = cfg.seed;
            meta["val_loss"] = val_loss;
            meta["epoch"] = epoch;
            best_ckpt = tape_rnn_to_checkpoint(model, meta);
            have_best = true;
        }

        if (!periodic_save_path.empty()) {
            nlohmann::json meta;
            meta["scheme"] = scheme == TrainingScheme::SupervisedI ? "supervised1" : "supervised2";
            meta["warmup"] = warmup;
            meta["seed"] = cfg.seed;
            meta["epoch"] = epoch + 1;
            meta["lr"] = adam.learning_rate();
            meta["best_val"] = best_val;
            meta["plateau_best"] = plateau.best_loss;
            meta["plateau_count"] = plateau.epochs_since_improve;
            meta["adam_step"] = adam.step_count();
            nn::Checkpoint periodic = tape_rnn_to_checkpoint(model, meta);
            for (const auto& e : adam.moments_m().entries())
                periodic.params.add("adam.m." + e.name, e.shape) = e.values;
            for (const auto& e : adam.moments_v().entries())
                periodic.params.add("adam.v." + e.name, e.shape) = e.values;
            nn::save_checkpoint(periodic_save_path, periodic);
        }

        result.epochs_run = epoch + 1;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        if (cfg.target_val_esr > 0.0 && val_loss < cfg.target_val_esr) break;
        if (elapsed > cfg.max_wall_seconds) break;
    }

    if (!have_best) throw TrainError("train: no epoch completed");
    result.best = std::move(best_ckpt);
    result.best_val_loss = best_val;
    return result;
}

EvalModes evaluate_tape_rnn(const nn::Checkpoint& ckpt, const std::vector<TapeFile>& files) {
    TapeRnnModel<float> model;
    tape_rnn_from_checkpoint(ckpt, model);
    const std::size_t warmup = ckpt.meta.value("warmup", std::size_t(1024));

    double num_del = 0.0, den_del = 0.0, num_dem = 0.0, den_dem = 0.0;
    for (const auto& f : files) {
        std::vector<float> h(std::size_t(model.hidden), 0.0f);
        std::vector<float> out(f.input.size());
        model.forward(f.input.data(), f.input.size(), h, out.data());
        const std::size_t n = f.input.size();
        if (n <= warmup) continue;

        std::vector<float> delayed(n - warmup);
        if (!f.tau.empty())
            delayed_prediction(out, f.tau, warmup, n, delayed.data());
        else
            std::copy(out.begin() + std::ptrdiff_t(warmup), out.end(), delayed.begin());
        for (std::size_t i = 0; i < delayed.size(); ++i) {
            const double e = double(f.target[warmup + i]) - double(delayed[i]);
            num_del += e * e;
            den_del += double(f.target[warmup + i]) * double(f.target[warmup + i]);
        }
        for (std::size_t i = warmup; i < n; ++i) {
            const double e = double(f.target_demod[i]) - double(out[i]);
            num_dem += e * e;
            den_dem += double(f.target_demod[i]) * double(f.target_demod[i]);
        }
    }
    EvalModes modes;
    modes.esr_delayed = den_del > 0.0 ? num_del / den_del : 0.0;
    modes.esr_demod = den_dem > 0.0 ? num_dem / den_dem : 0.0;
    return modes;
}

} // namespace magneto
