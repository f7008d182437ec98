#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "vfclassify/preprocess.hpp"
#include "vfclassify/prng.hpp"
#include "vfclassify/vfdata.hpp"

namespace vfc {

enum class Algorithm : std::uint8_t { LogReg, NaiveBayes, RandomForest, SgdSvm };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& text);

constexpr int kUnlimitedDepth = -1;

/// One bag of hyperparameters shared by the four algorithms; each fit
/// reads only the fields it understands.
struct Hyperparams {
    double learning_rate = 0.1;   // LOGREG step size
    double l2_lambda = 0.0;       // LOGREG 0, SGD_SVM wants > 0 (default below)
    std::size_t max_epochs = 2000;
    double tol = 1e-7;            // LOGREG loss-delta stop
    std::size_t n_trees = 101;    // odd by default so forest votes cannot tie
    int max_depth = kUnlimitedDepth;
    std::size_t min_samples_split = 2;
    double var_smoothing = 1e-9;
    std::uint64_t rng_seed = 0;

    static Hyperparams defaults_for(Algorithm algorithm);
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    bool operator==(const LogRegModel&) const = default;
};

struct NaiveBayesModel {
    std::array<double, 2> log_priors{};
    std::array<std::vector<double>, 2> means;     // per class, per feature
    std::array<std::vector<double>, 2> variances; // post-smoothing, > 0
    bool operator==(const NaiveBayesModel&) const = default;
};

/// Flat array of nodes; node 0 is the root. Internal nodes route
/// x[feature] <= threshold to `left`, otherwise `right`.
struct TreeNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Label predicted = Label::Other;
    std::array<std::int64_t, 2> class_counts{};
    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    Label predict(const FeatureVector& f) const;
    bool operator==(const DecisionTree&) const = default;
};

struct RandomForestModel {
    std::size_t dim = 0;
    std::vector<DecisionTree> trees;
    bool operator==(const RandomForestModel&) const = default;
};

struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    bool operator==(const SvmModel&) const = default;
};

using TrainedModel =
    std::variant<LogRegModel, NaiveBayesModel, RandomForestModel, SvmModel>;

Algorithm algorithm_of(const TrainedModel& model);
std::size_t dimension_of(const TrainedModel& model);

/// Overflow-safe logistic function: branches on sign so exp never sees a
/// positive argument. sigmoid(800) == 1.0, sigmoid(-800) underflows to 0,
/// never NaN.
double sigmoid(double z);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

/// Mean cross-entropy with optional L2 penalty (lambda/2 * |w|^2) and its
/// exact gradient. log arguments are floored at 1e-15.
LossGrad logreg_loss_grad(const std::vector<double>& w, double b,
                          const std::vector<FeatureVector>& X,
                          const std::vector<Label>& y, double l2);

/// Full-batch gradient descent from w = 0, b = 0; stops after max_epochs
/// or when the epoch-to-epoch loss change drops below tol. Throws
/// ValidationError when the loss goes non-finite (divergent step size).
/// Pass loss_trace to record the loss at the start of every epoch.
TrainedModel logreg_fit(const std::vector<FeatureVector>& X,
                        const std::vector<Label>& y, const Hyperparams& hyper,
                        std::vector<double>* loss_trace = nullptr);

double logreg_predict_proba(const LogRegModel& model, const FeatureVector& f);

/// Gaussian naive Bayes: per class/feature mean and population variance,
/// every variance raised by var_smoothing * (max over features of the
/// whole-data variance). A single-sample class still fits; a diagnostic
/// line is appended to `warnings` when given.
TrainedModel nb_fit(const std::vector<FeatureVector>& X,
                    const std::vector<Label>& y, const Hyperparams& hyper,
                    std::vector<std::string>* warnings = nullptr);

/// Joint log-density of f with each class: log prior plus the summed
/// per-feature Gaussian log-pdf. Prediction is the argmax; ties go to
/// label 0.
std::array<double, 2> nb_log_posterior(const NaiveBayesModel& model,
                                       const FeatureVector& f);

/// Gini impurity of a two-class count pair: 1 - sum((n_c/n)^2).
double gini(std::int64_t count0, std::int64_t count1);

/// CART with ceil(sqrt(d)) feature subsampling per node, midpoint
/// candidate thresholds, best Gini decrease (ties: lower feature index,
/// then lower threshold). Stops on purity, n < min_samples_split,
/// max_depth, or no impurity-reducing split. `rng` is the tree's private
/// stream.
DecisionTree tree_fit(const std::vector<FeatureVector>& X,
                      const std::vector<Label>& y, const Hyperparams& hyper,
                      SplitMix64& rng);

/// Bagged forest: tree t is grown on n bootstrap draws using the stream
/// splitmix64(rng_seed XOR t), so a parallel fit (n_threads > 1) is
/// identical to the serial one. `bootstrap = false` trains every tree on
/// the full sample (test hook).
TrainedModel forest_fit(const std::vector<FeatureVector>& X,
                        const std::vector<Label>& y, const Hyperparams& hyper,
                        std::size_t n_threads = 1, bool bootstrap = true);

/// One Pegasos update at step size eta: always shrink w by (1 - eta*lambda);
/// when the margin y_pm * (w.x + b) < 1 also add eta * y_pm * x to w and
/// eta * y_pm to b. y_pm is the label mapped to -1/+1.
void pegasos_step(SvmModel& model, const FeatureVector& x, double y_pm,
                  double eta, double lambda);

/// L2-regularized hinge objective: lambda/2 * |w|^2 + mean hinge loss.
double svm_objective(const SvmModel& model, const std::vector<FeatureVector>& X,
                     const std::vector<Label>& y, double lambda);

/// Pegasos SGD over max_epochs passes, samples visited in a per-epoch
/// shuffle of one splitmix64(rng_seed) stream, eta_t = 1/(lambda * t)
/// with t counting steps from 1 across epochs. Requires l2_lambda > 0.
TrainedModel svm_sgd_fit(const std::vector<FeatureVector>& X,
                         const std::vector<Label>& y, const Hyperparams& hyper);

/// Decision rules: LOGREG proba >= 0.5 -> 1; SVM score >= 0 -> 1;
/// NB argmax with ties -> 0; forest majority vote with ties -> 0.
Label predict(const TrainedModel& model, const FeatureVector& f);

/// Line-oriented text persistence, `vfclassify-model v1 <ALGORITHM>`
/// header, floats as shortest round-trip decimals. load_model of a saved
/// model predicts bit-identically to the original; truncated or corrupt
/// files fail closed with ValidationError.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

/// Serializes to the model file format in memory (used for persistence
/// and for whole-model equality in tests).
std::string model_to_string(const TrainedModel& model);
TrainedModel model_from_string(const std::string& text);

} // namespace vfc
