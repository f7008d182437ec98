#include "vfclassify/classifiers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "vfclassify/errors.hpp"
#include "text_util.hpp"

namespace vfc {

namespace {

void check_xy(const std::vector<FeatureVector>& X, const std::vector<Label>& y) {
    if (X.empty()) throw ValidationError("empty training set");
    if (X.size() != y.size())
        throw ValidationError("feature/label count mismatch: " +
                              std::to_string(X.size()) + " vs " +
                              std::to_string(y.size()));
    const std::size_t d = X.front().size();
    if (d == 0) throw ValidationError("zero-dimensional features");
    for (const auto& row : X)
        if (row.size() != d)
            throw ValidationError("feature rows differ in dimension");
}

void check_both_labels(const std::vector<Label>& y) {
    bool has[2] = {false, false};
    for (Label l : y) has[to_int(l)] = true;
    if (!has[0] || !has[1])
        throw ValidationError("training set must contain both labels");
}

void check_dim(const TrainedModel& model, const FeatureVector& f) {
    if (dimension_of(model) != f.size())
        throw ValidationError("model expects dimension " +
                              std::to_string(dimension_of(model)) + ", got " +
                              std::to_string(f.size()));
}

double dot(const std::vector<double>& w, const FeatureVector& x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * x[j];
    return acc;
}

} // namespace

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::LogReg: return "LOGREG";
        case Algorithm::NaiveBayes: return "NAIVE_BAYES";
        case Algorithm::RandomForest: return "RANDOM_FOREST";
        case Algorithm::SgdSvm: return "SGD_SVM";
    }
    throw ValidationError("unknown algorithm");
}

Algorithm algorithm_from_string(const std::string& text) {
    if (text == "LOGREG") return Algorithm::LogReg;
    if (text == "NAIVE_BAYES") return Algorithm::NaiveBayes;
    if (text == "RANDOM_FOREST") return Algorithm::RandomForest;
    if (text == "SGD_SVM") return Algorithm::SgdSvm;
    throw ValidationError("unknown algorithm tag '" + text + "'");
}

Hyperparams Hyperparams::defaults_for(Algorithm algorithm) {
    Hyperparams h;
    switch (algorithm) {
        case Algorithm::LogReg:
            h.learning_rate = 0.1;
            h.l2_lambda = 0.0;
            h.max_epochs = 2000;
            h.tol = 1e-7;
            break;
        case Algorithm::SgdSvm:
            h.l2_lambda = 0.01;
            h.max_epochs = 200;
            break;
        case Algorithm::RandomForest:
            h.n_trees = 101;
            h.max_depth = kUnlimitedDepth;
            h.min_samples_split = 2;
            break;
        case Algorithm::NaiveBayes:
            h.var_smoothing = 1e-9;
            break;
    }
    return h;
}

Algorithm algorithm_of(const TrainedModel& model) {
    switch (model.index()) {
        case 0: return Algorithm::LogReg;
        case 1: return Algorithm::NaiveBayes;
        case 2: return Algorithm::RandomForest;
        default: return Algorithm::SgdSvm;
    }
}

std::size_t dimension_of(const TrainedModel& model) {
    if (const auto* lr = std::get_if<LogRegModel>(&model)) return lr->weights.size();
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model))
        return nb->means[0].size();
    if (const auto* svm = std::get_if<SvmModel>(&model)) return svm->weights.size();
    return std::get<RandomForestModel>(model).dim;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LossGrad logreg_loss_grad(const std::vector<double>& w, double b,
                          const std::vector<FeatureVector>& X,
                          const std::vector<Label>& y, double l2) {
    check_xy(X, y);
    if (w.size() != X.front().size())
        throw ValidationError("weight/feature dimension mismatch");

    const std::size_t n = X.size();
    const std::size_t d = w.size();
    LossGrad out;
    out.grad_w.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(dot(w, X[i]) + b);
        const double yi = static_cast<double>(to_int(y[i]));
        out.loss -= yi * std::log(std::max(p, 1e-15)) +
                    (1.0 - yi) * std::log(std::max(1.0 - p, 1e-15));
        const double resid = p - yi;
        for (std::size_t j = 0; j < d; ++j) out.grad_w[j] += resid * X[i][j];
        out.grad_b += resid;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    out.loss *= inv_n;
    out.grad_b *= inv_n;
    double w_norm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        out.grad_w[j] = out.grad_w[j] * inv_n + l2 * w[j];
        w_norm2 += w[j] * w[j];
    }
    out.loss += 0.5 * l2 * w_norm2;
    return out;
}

TrainedModel logreg_fit(const std::vector<FeatureVector>& X,
                        const std::vector<Label>& y, const Hyperparams& hyper,
                        std::vector<double>* loss_trace) {
    check_xy(X, y);
    check_both_labels(y);
    if (!(hyper.learning_rate > 0.0))
        throw ValidationError("learning_rate must be > 0");
    if (!(hyper.tol > 0.0)) throw ValidationError("tol must be > 0");

    LogRegModel model;
    model.weights.assign(X.front().size(), 0.0);
    double prev_loss = std::numeric_limits<double>::infinity();
    for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        const LossGrad lg =
            logreg_loss_grad(model.weights, model.bias, X, y, hyper.l2_lambda);
        if (!std::isfinite(lg.loss))
            throw ValidationError(
                "logistic regression loss diverged (learning rate too large?)");
        if (loss_trace) loss_trace->push_back(lg.loss);
        if (std::abs(lg.loss - prev_loss) < hyper.tol) break;
        prev_loss = lg.loss;
        for (std::size_t j = 0; j < model.weights.size(); ++j)
            model.weights[j] -= hyper.learning_rate * lg.grad_w[j];
        model.bias -= hyper.learning_rate * lg.grad_b;
    }
    return model;
}

double logreg_predict_proba(const LogRegModel& model, const FeatureVector& f) {
    if (model.weights.size() != f.size())
        throw ValidationError("model/feature dimension mismatch");
    return sigmoid(dot(model.weights, f) + model.bias);
}

TrainedModel nb_fit(const std::vector<FeatureVector>& X,
                    const std::vector<Label>& y, const Hyperparams& hyper,
                    std::vector<std::string>* warnings) {
    check_xy(X, y);
    check_both_labels(y);
    if (hyper.var_smoothing < 0.0)
        throw ValidationError("var_smoothing must be >= 0");

    const std::size_t n = X.size();
    const std::size_t d = X.front().size();
    std::array<std::size_t, 2> counts{};
    for (Label l : y) ++counts[to_int(l)];

    NaiveBayesModel model;
    for (int c = 0; c < 2; ++c) {
        model.log_priors[c] = std::log(static_cast<double>(counts[c]) /
                                       static_cast<double>(n));
        model.means[c].assign(d, 0.0);
        model.variances[c].assign(d, 0.0);
        if (counts[c] == 1 && warnings)
            warnings->push_back("class " + std::to_string(c) +
                                " has a single sample; its variance is the "
                                "smoothing floor alone");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int c = to_int(y[i]);
        for (std::size_t j = 0; j < d; ++j) model.means[c][j] += X[i][j];
    }
    for (int c = 0; c < 2; ++c)
        for (double& m : model.means[c]) m /= static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = to_int(y[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = X[i][j] - model.means[c][j];
            model.variances[c][j] += diff * diff;
        }
    }
    for (int c = 0; c < 2; ++c)
        for (double& v : model.variances[c]) v /= static_cast<double>(counts[c]);

    // Scale-aware smoothing: proportional to the largest whole-data variance.
    double max_total_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X[i][j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            var += (X[i][j] - mean) * (X[i][j] - mean);
        max_total_var = std::max(max_total_var, var / static_cast<double>(n));
    }
    const double eps = hyper.var_smoothing * max_total_var;
    for (int c = 0; c < 2; ++c)
        for (double& v : model.variances[c]) v += eps;
    for (int c = 0; c < 2; ++c)
        for (double v : model.variances[c])
            if (!(v > 0.0))
                throw ValidationError(
                    "naive Bayes variance is zero after smoothing; increase "
                    "var_smoothing");
    return model;
}

std::array<double, 2> nb_log_posterior(const NaiveBayesModel& model,
                                       const FeatureVector& f) {
    if (f.size() != model.means[0].size())
        throw ValidationError("model/feature dimension mismatch");
    std::array<double, 2> scores{};
    for (int c = 0; c < 2; ++c) {
        double score = model.log_priors[c];
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double var = model.variances[c][j];
            const double diff = f[j] - model.means[c][j];
            score += -0.5 * std::log(2.0 * std::numbers::pi * var) -
                     diff * diff / (2.0 * var);
        }
        scores[c] = score;
    }
    return scores;
}

double gini(std::int64_t count0, std::int64_t count1) {
    if (count0 < 0 || count1 < 0 || count0 + count1 == 0)
        throw ValidationError("gini needs nonnegative counts, not both zero");
    const double n = static_cast<double>(count0 + count1);
    const double p0 = static_cast<double>(count0) / n;
    const double p1 = static_cast<double>(count1) / n;
    return 1.0 - (p0 * p0 + p1 * p1);
}

Label DecisionTree::predict(const FeatureVector& f) const {
    if (nodes.empty()) throw ValidationError("empty decision tree");
    std::size_t at = 0;
    while (!nodes[at].is_leaf) {
        const TreeNode& node = nodes[at];
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= f.size())
            throw ValidationError("tree feature index out of range");
        at = static_cast<std::size_t>(f[static_cast<std::size_t>(node.feature)] <=
                                              node.threshold
                                          ? node.left
                                          : node.right);
    }
    return nodes[at].predicted;
}

namespace {

struct BestSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;
};

// Candidate features are evaluated in ascending index order with
// ascending thresholds, and only strictly better decreases replace the
// incumbent, which realizes the (lower feature, lower threshold) tie rule.
BestSplit find_best_split(const std::vector<FeatureVector>& X,
                          const std::vector<Label>& y,
                          const std::vector<std::size_t>& samples,
                          SplitMix64& rng) {
    const std::size_t d = X.front().size();
    const auto k = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(d))));

    std::vector<std::size_t> pool(d);
    for (std::size_t j = 0; j < d; ++j) pool[j] = j;
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.next_below(d - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> candidates(pool.begin(), pool.begin() + k);
    std::sort(candidates.begin(), candidates.end());

    std::int64_t total[2] = {0, 0};
    for (std::size_t i : samples) ++total[to_int(y[i])];
    const double n = static_cast<double>(samples.size());
    const double parent_gini = gini(total[0], total[1]);

    BestSplit best;
    std::vector<std::size_t> order;
    for (std::size_t feature : candidates) {
        order = samples;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return X[a][feature] < X[b][feature];
        });
        std::int64_t left[2] = {0, 0};
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            ++left[to_int(y[order[i]])];
            const double v = X[order[i]][feature];
            const double next = X[order[i + 1]][feature];
            if (v == next) continue; // threshold only between distinct values
            const double threshold = (v + next) / 2.0;
            const auto n_left = static_cast<std::int64_t>(i + 1);
            const auto n_right = static_cast<std::int64_t>(order.size()) - n_left;
            const double decrease =
                parent_gini -
                (static_cast<double>(n_left) / n) * gini(left[0], left[1]) -
                (static_cast<double>(n_right) / n) *
                    gini(total[0] - left[0], total[1] - left[1]);
            if (decrease > best.decrease) {
                best.found = true;
                best.feature = feature;
                best.threshold = threshold;
                best.decrease = decrease;
            }
        }
    }
    return best;
}

std::size_t build_tree(DecisionTree& tree, const std::vector<FeatureVector>& X,
                       const std::vector<Label>& y,
                       const std::vector<std::size_t>& samples,
                       const Hyperparams& hyper, SplitMix64& rng, int depth) {
    std::int64_t counts[2] = {0, 0};
    for (std::size_t i : samples) ++counts[to_int(y[i])];

    const std::size_t index = tree.nodes.size();
    tree.nodes.emplace_back();
    auto make_leaf = [&] {
        TreeNode& leaf = tree.nodes[index];
        leaf.is_leaf = true;
        leaf.predicted = counts[1] > counts[0] ? Label::Glaucoma : Label::Other;
        leaf.class_counts = {counts[0], counts[1]};
        return index;
    };

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool too_small = samples.size() < hyper.min_samples_split;
    const bool at_depth =
        hyper.max_depth != kUnlimitedDepth && depth >= hyper.max_depth;
    if (pure || too_small || at_depth) return make_leaf();

    const BestSplit best = find_best_split(X, y, samples, rng);
    if (!best.found) return make_leaf();

    std::vector<std::size_t> left_samples, right_samples;
    for (std::size_t i : samples)
        (X[i][best.feature] <= best.threshold ? left_samples : right_samples)
            .push_back(i);

    TreeNode& node = tree.nodes[index];
    node.is_leaf = false;
    node.feature = static_cast<int>(best.feature);
    node.threshold = best.threshold;
    node.class_counts = {counts[0], counts[1]};
    const std::size_t left =
        build_tree(tree, X, y, left_samples, hyper, rng, depth + 1);
    const std::size_t right =
        build_tree(tree, X, y, right_samples, hyper, rng, depth + 1);
    tree.nodes[index].left = static_cast<int>(left);
    tree.nodes[index].right = static_cast<int>(right);
    return index;
}

} // namespace

DecisionTree tree_fit(const std::vector<FeatureVector>& X,
                      const std::vector<Label>& y, const Hyperparams& hyper,
                      SplitMix64& rng) {
    check_xy(X, y);
    if (hyper.min_samples_split < 2)
        throw ValidationError("min_samples_split must be >= 2");
    std::vector<std::size_t> samples(X.size());
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = i;
    DecisionTree tree;
    build_tree(tree, X, y, samples, hyper, rng, 0);
    return tree;
}

TrainedModel forest_fit(const std::vector<FeatureVector>& X,
                        const std::vector<Label>& y, const Hyperparams& hyper,
                        std::size_t n_threads, bool bootstrap) {
    check_xy(X, y);
    check_both_labels(y);
    if (hyper.n_trees == 0) throw ValidationError("n_trees must be >= 1");

    RandomForestModel forest;
    forest.dim = X.front().size();
    forest.trees.resize(hyper.n_trees);
    const std::size_t n = X.size();

    auto fit_one = [&](std::size_t t) {
        SplitMix64 rng(hyper.rng_seed ^ static_cast<std::uint64_t>(t));
        if (bootstrap) {
            std::vector<FeatureVector> Xb;
            std::vector<Label> yb;
            Xb.reserve(n);
            yb.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto pick = static_cast<std::size_t>(rng.next_below(n));
                Xb.push_back(X[pick]);
                yb.push_back(y[pick]);
            }
            forest.trees[t] = tree_fit(Xb, yb, hyper, rng);
        } else {
            forest.trees[t] = tree_fit(X, y, hyper, rng);
        }
    };

    if (n_threads <= 1) {
        for (std::size_t t = 0; t < hyper.n_trees; ++t) fit_one(t);
    } else {
        std::atomic<std::size_t> next_tree{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&] {
            while (true) {
                const std::size_t t = next_tree.fetch_add(1);
                if (t >= hyper.n_trees) break;
                try {
                    fit_one(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < std::min(n_threads, hyper.n_trees); ++w)
            threads.emplace_back(worker);
        for (auto& th : threads) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return forest;
}

void pegasos_step(SvmModel& model, const FeatureVector& x, double y_pm,
                  double eta, double lambda) {
    const double margin = y_pm * (dot(model.weights, x) + model.bias);
    const double shrink = 1.0 - eta * lambda;
    if (margin < 1.0) {
        for (std::size_t j = 0; j < model.weights.size(); ++j)
            model.weights[j] = shrink * model.weights[j] + eta * y_pm * x[j];
        model.bias += eta * y_pm;
    } else {
        for (double& w : model.weights) w *= shrink;
    }
}

double svm_objective(const SvmModel& model, const std::vector<FeatureVector>& X,
                     const std::vector<Label>& y, double lambda) {
    check_xy(X, y);
    double w_norm2 = 0.0;
    for (double w : model.weights) w_norm2 += w * w;
    double hinge = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double y_pm = y[i] == Label::Glaucoma ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y_pm * (dot(model.weights, X[i]) + model.bias));
    }
    return 0.5 * lambda * w_norm2 + hinge / static_cast<double>(X.size());
}

TrainedModel svm_sgd_fit(const std::vector<FeatureVector>& X,
                         const std::vector<Label>& y, const Hyperparams& hyper) {
    check_xy(X, y);
    check_both_labels(y);
    if (!(hyper.l2_lambda > 0.0))
        throw ValidationError("SGD SVM requires l2_lambda > 0");

    SvmModel model;
    model.weights.assign(X.front().size(), 0.0);
    const std::size_t n = X.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    SplitMix64 rng(hyper.rng_seed);
    std::uint64_t step = 0;
    for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(order[i], order[rng.next_below(i + 1)]);
        for (std::size_t i : order) {
            ++step; // eta_t = 1/(lambda t), t counted across epochs
            const double eta =
                1.0 / (hyper.l2_lambda * static_cast<double>(step));
            const double y_pm = y[i] == Label::Glaucoma ? 1.0 : -1.0;
            pegasos_step(model, X[i], y_pm, eta, hyper.l2_lambda);
        }
    }
    return model;
}

Label predict(const TrainedModel& model, const FeatureVector& f) {
    check_dim(model, f);
    if (const auto* lr = std::get_if<LogRegModel>(&model))
        return logreg_predict_proba(*lr, f) >= 0.5 ? Label::Glaucoma : Label::Other;
    if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
        const auto scores = nb_log_posterior(*nb, f);
        return scores[1] > scores[0] ? Label::Glaucoma : Label::Other;
    }
    if (const auto* svm = std::get_if<SvmModel>(&model))
        return dot(svm->weights, f) + svm->bias >= 0.0 ? Label::Glaucoma
                                                       : Label::Other;
    const auto& forest = std::get<RandomForestModel>(model);
    if (forest.trees.empty()) throw ValidationError("empty forest");
    std::int64_t votes[2] = {0, 0};
    for (const auto& tree : forest.trees) ++votes[to_int(tree.predict(f))];
    return votes[1] > votes[0] ? Label::Glaucoma : Label::Other;
}

namespace {

void write_vector(std::ostream& out, const std::string& tag,
                  const std::vector<double>& values) {
    out << tag;
    for (double v : values) out << ' ' << detail::format_double(v);
    out << '\n';
}

void write_tree(std::ostream& out, const DecisionTree& tree, std::size_t at) {
    const TreeNode& node = tree.nodes[at];
    if (node.is_leaf) {
        out << "leaf " << to_string(node.predicted) << ' ' << node.class_counts[0]
            << ' ' << node.class_counts[1] << '\n';
    } else {
        out << "node " << node.feature << ' '
            << detail::format_double(node.threshold) << '\n';
        write_tree(out, tree, static_cast<std::size_t>(node.left));
        write_tree(out, tree, static_cast<std::size_t>(node.right));
    }
}

class LineReader {
public:
    explicit LineReader(const std::string& text) : stream_(text) {}

    std::string next(const std::string& expectation) {
        std::string line;
        while (std::getline(stream_, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!detail::trim(line).empty()) return line;
        }
        throw ValidationError("model file truncated: expected " + expectation);
    }

    bool done() {
        std::string line;
        while (std::getline(stream_, line))
            if (!detail::trim(line).empty()) {
                rest_ = line;
                return false;
            }
        return true;
    }

    const std::string& rest() const { return rest_; }

private:
    std::istringstream stream_;
    std::string rest_;
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

std::vector<double> read_vector(LineReader& reader, const std::string& tag,
                                std::size_t dim) {
    const auto toks = tokens_of(reader.next(tag + " line"));
    if (toks.empty() || toks[0] != tag)
        throw ValidationError("model file: expected '" + tag + "' line");
    if (toks.size() != dim + 1)
        throw ValidationError("model file: '" + tag + "' needs " +
                              std::to_string(dim) + " values");
    std::vector<double> values(dim);
    for (std::size_t i = 0; i < dim; ++i)
        values[i] = detail::parse_double(toks[i + 1], tag);
    return values;
}

std::size_t read_sized(LineReader& reader, const std::string& tag) {
    const auto toks = tokens_of(reader.next(tag + " line"));
    if (toks.size() != 2 || toks[0] != tag)
        throw ValidationError("model file: expected '" + tag + " <count>' line");
    const auto v = detail::parse_int(toks[1], tag);
    if (v < 0) throw ValidationError("model file: negative " + tag);
    return static_cast<std::size_t>(v);
}

std::size_t parse_tree_nodes(LineReader& reader, DecisionTree& tree,
                             std::size_t dim) {
    const std::string line = reader.next("tree node");
    const auto toks = tokens_of(line);
    const std::size_t index = tree.nodes.size();
    tree.nodes.emplace_back();
    if (toks.size() == 4 && toks[0] == "leaf") {
        TreeNode& leaf = tree.nodes[index];
        leaf.is_leaf = true;
        leaf.predicted = label_from_string(toks[1]);
        leaf.class_counts[0] = detail::parse_int(toks[2], "leaf count");
        leaf.class_counts[1] = detail::parse_int(toks[3], "leaf count");
        if (leaf.class_counts[0] < 0 || leaf.class_counts[1] < 0)
            throw ValidationError("model file: negative leaf count");
        return index;
    }
    if (toks.size() == 3 && toks[0] == "node") {
        const auto feature = detail::parse_int(toks[1], "node feature");
        const double threshold = detail::parse_double(toks[2], "node threshold");
        if (feature < 0 || static_cast<std::size_t>(feature) >= dim)
            throw ValidationError("model file: node feature out of range");
        if (!std::isfinite(threshold))
            throw ValidationError("model file: non-finite threshold");
        const std::size_t left = parse_tree_nodes(reader, tree, dim);
        const std::size_t right = parse_tree_nodes(reader, tree, dim);
        TreeNode& node = tree.nodes[index];
        node.is_leaf = false;
        node.feature = static_cast<int>(feature);
        node.threshold = threshold;
        node.left = static_cast<int>(left);
        node.right = static_cast<int>(right);
        return index;
    }
    throw ValidationError("model file: expected 'node' or 'leaf', got '" + line +
                          "'");
}

} // namespace

std::string model_to_string(const TrainedModel& model) {
    std::ostringstream out;
    out << "vfclassify-model v1 " << to_string(algorithm_of(model)) << '\n';
    if (const auto* lr = std::get_if<LogRegModel>(&model)) {
        out << "dim " << lr->weights.size() << '\n';
        out << "bias " << detail::format_double(lr->bias) << '\n';
        write_vector(out, "weights", lr->weights);
    } else if (const auto* nb = std::get_if<NaiveBayesModel>(&model)) {
        out << "dim " << nb->means[0].size() << '\n';
        out << "log_priors " << detail::format_double(nb->log_priors[0]) << ' '
            << detail::format_double(nb->log_priors[1]) << '\n';
        write_vector(out, "means0", nb->means[0]);
        write_vector(out, "means1", nb->means[1]);
        write_vector(out, "variances0", nb->variances[0]);
        write_vector(out, "variances1", nb->variances[1]);
    } else if (const auto* svm = std::get_if<SvmModel>(&model)) {
        out << "dim " << svm->weights.size() << '\n';
        out << "bias " << detail::format_double(svm->bias) << '\n';
        write_vector(out, "weights", svm->weights);
    } else {
        const auto& forest = std::get<RandomForestModel>(model);
        out << "dim " << dimension_of(model) << '\n';
        out << "trees " << forest.trees.size() << '\n';
        for (std::size_t t = 0; t < forest.trees.size(); ++t) {
            out << "tree " << t << '\n';
            write_tree(out, forest.trees[t], 0);
        }
    }
    return out.str();
}

TrainedModel model_from_string(const std::string& text) {
    LineReader reader(text);
    const auto header = tokens_of(reader.next("header"));
    if (header.size() != 3 || header[0] != "vfclassify-model")
        throw ValidationError("not a vfclassify model file");
    if (header[1] != "v1")
        throw ValidationError("unsupported model file version '" + header[1] + "'");
    const Algorithm algorithm = algorithm_from_string(header[2]);
    const std::size_t dim = read_sized(reader, "dim");
    if (dim == 0) throw ValidationError("model file: dim must be >= 1");

    TrainedModel model;
    switch (algorithm) {
        case Algorithm::LogReg:
        case Algorithm::SgdSvm: {
            const auto bias_toks = tokens_of(reader.next("bias line"));
            if (bias_toks.size() != 2 || bias_toks[0] != "bias")
                throw ValidationError("model file: expected 'bias <value>'");
            const double bias = detail::parse_double(bias_toks[1], "bias");
            const auto weights = read_vector(reader, "weights", dim);
            if (algorithm == Algorithm::LogReg)
                model = LogRegModel{weights, bias};
            else
                model = SvmModel{weights, bias};
            break;
        }
        case Algorithm::NaiveBayes: {
            NaiveBayesModel nb;
            const auto prior_toks = tokens_of(reader.next("log_priors line"));
            if (prior_toks.size() != 3 || prior_toks[0] != "log_priors")
                throw ValidationError("model file: expected 'log_priors <p0> <p1>'");
            nb.log_priors[0] = detail::parse_double(prior_toks[1], "log_priors");
            nb.log_priors[1] = detail::parse_double(prior_toks[2], "log_priors");
            nb.means[0] = read_vector(reader, "means0", dim);
            nb.means[1] = read_vector(reader, "means1", dim);
            nb.variances[0] = read_vector(reader, "variances0", dim);
            nb.variances[1] = read_vector(reader, "variances1", dim);
            for (int c = 0; c < 2; ++c)
                for (double v : nb.variances[c])
                    if (!(v > 0.0))
                        throw ValidationError(
                            "model file: naive Bayes variance must be > 0");
            model = std::move(nb);
            break;
        }
        case Algorithm::RandomForest: {
            RandomForestModel forest;
            forest.dim = dim;
            const std::size_t n_trees = read_sized(reader, "trees");
            if (n_trees == 0)
                throw ValidationError("model file: forest must be nonempty");
            forest.trees.resize(n_trees);
            for (std::size_t t = 0; t < n_trees; ++t) {
                const auto toks = tokens_of(reader.next("tree header"));
                if (toks.size() != 2 || toks[0] != "tree" ||
                    detail::parse_int(toks[1], "tree index") !=
                        static_cast<std::int64_t>(t))
                    throw ValidationError("model file: expected 'tree " +
                                          std::to_string(t) + "'");
                parse_tree_nodes(reader, forest.trees[t], dim);
            }
            model = std::move(forest);
            break;
        }
    }
    if (!reader.done())
        throw ValidationError("model file: trailing content '" + reader.rest() +
                              "'");
    return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model " + path.string());
    out << model_to_string(model);
    if (!out) throw IoError("write failed for " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_string(buffer.str());
}

} // namespace vfc
