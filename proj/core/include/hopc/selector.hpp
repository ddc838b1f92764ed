#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "hopc/features.hpp"
#include "hopc/ilt.hpp"

namespace hopc {

enum class EngineChoice { MB_OPC, ILT };

std::string to_string(EngineChoice c);
EngineChoice engine_choice_from_string(const std::string& s);

struct DesignOutcome {
  std::string id;
  FeatureVector features;
  OpcResult mb;
  OpcResult ilt;
};

struct LabeledDesign {
  std::string id;
  FeatureVector features;
  EngineChoice label = EngineChoice::MB_OPC;
  double mse_mb = 0;
  double mse_ilt = 0;
};

/// Label = ILT iff its MSE is strictly lower; ties go to MB-OPC (the
/// faster engine).
std::vector<LabeledDesign> label_designs(const std::vector<DesignOutcome>& outcomes);

/// Linear discriminative model over standardized features; score > 0
/// predicts ILT. Standardization statistics and the feature pipeline
/// fingerprint travel with the model.
struct SelectorModel {
  std::vector<double> weights;
  double bias = 0;
  std::vector<double> mean, stdev;
  std::string fingerprint;
  uint64_t seed = 0;
  std::vector<double> loss_trace;  // per-epoch training loss, not persisted

  int dim() const { return int(weights.size()); }
  double score(const FeatureVector& f) const;
};

enum class LossKind { PlainLogistic, BblLogistic, AucPairwise };
enum class PhiKind { Logistic, SquaredHinge };

struct TrainConfig {
  int epochs = 500;
  double learning_rate = 0.1;
  double bbl_beta = 8.0;
  LossKind loss = LossKind::PlainLogistic;
  PhiKind phi = PhiKind::Logistic;
  uint64_t seed = 0;

  void validate() const {
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (learning_rate <= 0) throw ConfigError("train: learning rate must be positive");
    if (loss == LossKind::BblLogistic && bbl_beta <= 0)
      throw ConfigError("train: bbl beta must be positive");
  }
};

/// epsilon(l) = 1/(1+exp(beta*l)) for l <= 0.3, else 0. Softens the
/// positive-class target to 1 - epsilon during biased training.
double bbl_bias(double l, double beta);

/// (1/(N+ N-)) sum_ij Phi(f(x+_i) - f(x-_j)); Phi logistic
/// log(1+exp(-t)) or squared hinge max(0, 1-t)^2.
double auc_pairwise_loss(const std::vector<double>& scores_pos,
                         const std::vector<double>& scores_neg, PhiKind phi);

/// Full-batch gradient descent from zero weights; deterministic.
SelectorModel train_selector(const std::vector<LabeledDesign>& data, const TrainConfig& cfg,
                             const std::string& fingerprint);

/// ILT iff score > 0. Throws on fingerprint mismatch.
EngineChoice predict_engine(const FeatureVector& features, const SelectorModel& model,
                            const std::string& fingerprint);

// Plain-text persistence, 17-significant-digit decimal (bit-exact).
void save_model(const std::string& path, const SelectorModel& model);
SelectorModel load_model(const std::string& path);

}  // namespace hopc
