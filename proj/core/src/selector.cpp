#include "hopc/selector.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hopc {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(-t)) without overflow
double softplus_neg(double t) { return t < -35.0 ? -t : std::log1p(std::exp(-t)); }

}  // namespace

std::string to_string(EngineChoice c) { return c == EngineChoice::ILT ? "ILT" : "MB_OPC"; }

EngineChoice engine_choice_from_string(const std::string& s) {
  if (s == "ILT") return EngineChoice::ILT;
  if (s == "MB_OPC") return EngineChoice::MB_OPC;
  throw InputError("unknown engine choice '" + s + "'");
}

std::vector<LabeledDesign> label_designs(const std::vector<DesignOutcome>& outcomes) {
  std::vector<LabeledDesign> out;
  for (const DesignOutcome& o : outcomes) {
    if (o.mb.engine.empty() || o.ilt.engine.empty())
      throw InputError("label_designs: design '" + o.id + "' is missing an engine result");
    LabeledDesign d;
    d.id = o.id;
    d.features = o.features;
    d.mse_mb = o.mb.mse;
    d.mse_ilt = o.ilt.mse;
    d.label = o.ilt.mse < o.mb.mse ? EngineChoice::ILT : EngineChoice::MB_OPC;
    out.push_back(std::move(d));
  }
  return out;
}

double SelectorModel::score(const FeatureVector& f) const {
  if (int(f.values.size()) != dim())
    throw InputError("selector: feature dimension mismatch");
  double s = bias;
  for (int i = 0; i < dim(); ++i) s += weights[i] * (f.values[i] - mean[i]) / stdev[i];
  return s;
}

double bbl_bias(double l, double beta) {
  if (l < 0) throw InputError("bbl_bias: loss must be nonnegative");
  if (l > 0.3) return 0.0;
  return 1.0 / (1.0 + std::exp(beta * l));
}

double auc_pairwise_loss(const std::vector<double>& scores_pos,
                         const std::vector<double>& scores_neg, PhiKind phi) {
  if (scores_pos.empty() || scores_neg.empty())
    throw InputError("auc_pairwise_loss: both classes must be non-empty");
  double sum = 0;
  for (double sp : scores_pos)
    for (double sn : scores_neg) {
      double t = sp - sn;
      if (phi == PhiKind::Logistic) {
        sum += softplus_neg(t);
      } else {
        double h = std::max(0.0, 1.0 - t);
        sum += h * h;
      }
    }
  return sum / (double(scores_pos.size()) * double(scores_neg.size()));
}

SelectorModel train_selector(const std::vector<LabeledDesign>& data, const TrainConfig& cfg,
                             const std::string& fingerprint) {
  cfg.validate();
  if (data.empty()) throw InputError("train_selector: empty training set");
  const size_t n = data.size();
  const int d = int(data[0].features.values.size());
  size_t n_pos = 0;
  for (const LabeledDesign& s : data) {
    if (int(s.features.values.size()) != d)
      throw InputError("train_selector: inconsistent feature dimensions");
    if (s.label == EngineChoice::ILT) ++n_pos;
  }
  if (n_pos == 0 || n_pos == n)
    throw InputError("train_selector: both engine labels must be present");

  SelectorModel model;
  model.fingerprint = fingerprint;
  model.seed = cfg.seed;
  model.weights.assign(size_t(d), 0.0);
  model.mean.assign(size_t(d), 0.0);
  model.stdev.assign(size_t(d), 1.0);

  for (const LabeledDesign& s : data)
    for (int i = 0; i < d; ++i) model.mean[i] += s.features.values[i];
  for (int i = 0; i < d; ++i) model.mean[i] /= double(n);
  for (const LabeledDesign& s : data)
    for (int i = 0; i < d; ++i) {
      double c = s.features.values[i] - model.mean[i];
      model.stdev[i] += c * c;
    }
  for (int i = 0; i < d; ++i) {
    model.stdev[i] = std::sqrt((model.stdev[i] - 1.0) / double(n));
    if (model.stdev[i] <= 0) model.stdev[i] = 1.0;  // constant feature
  }

  // Standardized design matrix and {0,1} targets (ILT = 1).
  std::vector<std::vector<double>> X(n, std::vector<double>(size_t(d)));
  std::vector<double> y(n);
  for (size_t s = 0; s < n; ++s) {
    for (int i = 0; i < d; ++i)
      X[s][i] = (data[s].features.values[i] - model.mean[i]) / model.stdev[i];
    y[s] = data[s].label == EngineChoice::ILT ? 1.0 : 0.0;
  }

  std::vector<double> score(n), grad_w(size_t(d), 0.0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t s = 0; s < n; ++s) {
      double v = model.bias;
      for (int i = 0; i < d; ++i) v += model.weights[i] * X[s][i];
      score[s] = v;
    }

    double loss = 0, grad_b = 0;
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    if (cfg.loss == LossKind::AucPairwise) {
      std::vector<size_t> pos, neg;
      for (size_t s = 0; s < n; ++s) (y[s] > 0.5 ? pos : neg).push_back(s);
      double inv = 1.0 / (double(pos.size()) * double(neg.size()));
      for (size_t ip : pos)
        for (size_t in : neg) {
          double t = score[ip] - score[in];
          double dphi;
          if (cfg.phi == PhiKind::Logistic) {
            loss += softplus_neg(t) * inv;
            dphi = -sigmoid(-t);
          } else {
            double h = std::max(0.0, 1.0 - t);
            loss += h * h * inv;
            dphi = -2.0 * h;
          }
          for (int i = 0; i < d; ++i) grad_w[i] += dphi * (X[ip][i] - X[in][i]) * inv;
          // bias cancels in score differences
        }
    } else {
      // Cross-entropy targets, optionally softened by the batch bias.
      double target_pos = 1.0;
      if (cfg.loss == LossKind::BblLogistic) {
        double unbiased = 0;
        for (size_t s = 0; s < n; ++s) {
          double p = sigmoid(score[s]);
          unbiased -= y[s] > 0.5 ? std::log(std::max(p, 1e-300))
                                 : std::log(std::max(1.0 - p, 1e-300));
        }
        target_pos = 1.0 - bbl_bias(unbiased / double(n), cfg.bbl_beta);
      }
      for (size_t s = 0; s < n; ++s) {
        double p = sigmoid(score[s]);
        double t = y[s] > 0.5 ? target_pos : 0.0;
        loss -= (t * std::log(std::max(p, 1e-300)) +
                 (1.0 - t) * std::log(std::max(1.0 - p, 1e-300))) /
                double(n);
        double g = (p - t) / double(n);
        for (int i = 0; i < d; ++i) grad_w[i] += g * X[s][i];
        grad_b += g;
      }
    }

    if (!std::isfinite(loss))
      throw EngineError("train_selector: non-finite loss at epoch " + std::to_string(epoch));
    model.loss_trace.push_back(loss);
    for (int i = 0; i < d; ++i) model.weights[i] -= cfg.learning_rate * grad_w[i];
    model.bias -= cfg.learning_rate * grad_b;
  }
  return model;
}

EngineChoice predict_engine(const FeatureVector& features, const SelectorModel& model,
                            const std::string& fingerprint) {
  if (fingerprint != model.fingerprint)
    throw InputError("predict_engine: feature pipeline fingerprint mismatch ('" + fingerprint +
                     "' vs model '" + model.fingerprint + "')");
  return model.score(features) > 0 ? EngineChoice::ILT : EngineChoice::MB_OPC;
}

void save_model(const std::string& path, const SelectorModel& model) {
  std::ofstream out(path);
  if (!out) throw InputError("save_model: cannot open " + path);
  out.precision(17);
  out << "hopc-selector v1\n";
  out << "dim " << model.dim() << "\n";
  out << "seed " << model.seed << "\n";
  out << "fingerprint " << model.fingerprint << "\n";
  out << "bias " << model.bias << "\n";
  auto vec = [&](const char* key, const std::vector<double>& v) {
    out << key;
    for (double x : v) out << " " << x;
    out << "\n";
  };
  vec("weights", model.weights);
  vec("mean", model.mean);
  vec("std", model.stdev);
}

SelectorModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("load_model: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "hopc-selector v1")
    throw InputError("load_model: bad header in " + path);

  SelectorModel model;
  int dim = -1;
  auto read_vec = [&](std::istringstream& is, std::vector<double>& v) {
    v.clear();
    for (double x; is >> x;) v.push_back(x);
    if (int(v.size()) != dim) throw InputError("load_model: vector length mismatch");
  };
  while (std::getline(in, line)) {
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "dim") is >> dim;
    else if (key == "seed") is >> model.seed;
    else if (key == "fingerprint") is >> model.fingerprint;
    else if (key == "bias") is >> model.bias;
    else if (key == "weights") read_vec(is, model.weights);
    else if (key == "mean") read_vec(is, model.mean);
    else if (key == "std") read_vec(is, model.stdev);
    else if (!key.empty()) throw InputError("load_model: unknown key '" + key + "'");
  }
  if (dim < 0 || model.dim() != dim) throw InputError("load_model: incomplete model file");
  return model;
}

}  // namespace hopc
