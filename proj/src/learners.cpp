#include "secpatch/learners.hpp"

#include <cmath>

#include "secpatch/errors.hpp"

namespace secpatch {

namespace {

void check_labels(const std::vector<int>& ys) {
    for (int y : ys)
        if (y != 0 && y != 1)
            throw ConfigInvalid("labels must be 0 or 1, got " + std::to_string(y));
}

// log(1 + e^z) without overflow.
double softplus(double z) {
    if (z > 0)
        return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

}  // namespace

double stable_sigmoid(double z) {
    if (z >= 0)
        return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

NaiveBayesModel nb_train(const std::vector<SparseVector>& xs, const std::vector<int>& ys,
                         int vocab_size, double alpha) {
    if (xs.empty())
        throw EmptyInput("nb_train: no examples");
    if (xs.size() != ys.size())
        throw DimensionMismatch("nb_train: example/label count mismatch");
    if (alpha <= 0.0)
        throw ConfigInvalid("nb_train: alpha must be > 0");
    if (vocab_size < 1)
        throw ConfigInvalid("nb_train: vocabulary size must be >= 1");
    check_labels(ys);

    Eigen::Vector2d doc_count = Eigen::Vector2d::Zero();
    Eigen::MatrixXd term_count = Eigen::MatrixXd::Zero(2, vocab_size);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        doc_count[ys[i]] += 1.0;
        for (const SparseEntry& entry : xs[i].entries) {
            if (entry.index < 0 || entry.index >= vocab_size)
                throw IndexOutOfVocabulary("nb_train: index " + std::to_string(entry.index) +
                                           " outside vocabulary of size " +
                                           std::to_string(vocab_size));
            term_count(ys[i], entry.index) += entry.value;
        }
    }
    if (doc_count[0] == 0.0 || doc_count[1] == 0.0)
        throw SingleClassInput("nb_train: both classes must be present");

    NaiveBayesModel model;
    model.alpha = alpha;
    model.vocab_size = vocab_size;
    model.log_likelihood.resize(2, vocab_size);
    const double total_docs = doc_count.sum();
    for (int c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(doc_count[c] / total_docs);
        const double denominator = term_count.row(c).sum() + alpha * vocab_size;
        for (int t = 0; t < vocab_size; ++t)
            model.log_likelihood(c, t) = std::log((term_count(c, t) + alpha) / denominator);
    }
    return model;
}

double nb_predict_proba(const NaiveBayesModel& model, const SparseVector& x) {
    Eigen::Vector2d score = model.log_prior;
    for (const SparseEntry& entry : x.entries) {
        if (entry.index < 0 || entry.index >= model.vocab_size)
            throw IndexOutOfVocabulary("nb_predict_proba: index " + std::to_string(entry.index) +
                                       " outside vocabulary of size " +
                                       std::to_string(model.vocab_size));
        score[0] += entry.value * model.log_likelihood(0, entry.index);
        score[1] += entry.value * model.log_likelihood(1, entry.index);
    }
    // Two-class log-sum-exp normalization collapses to a sigmoid of the
    // score difference.
    return stable_sigmoid(score[1] - score[0]);
}

namespace {

void check_lr_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() == 0)
        throw EmptyInput("logistic regression: no examples");
    if (X.rows() != y.size())
        throw DimensionMismatch("logistic regression: X has " + std::to_string(X.rows()) +
                                " rows but y has " + std::to_string(y.size()) + " entries");
}

double loss_at(const Eigen::VectorXd& w, double b, double lambda, const Eigen::MatrixXd& X,
               const Eigen::VectorXd& y) {
    const Eigen::VectorXd z = X * w + Eigen::VectorXd::Constant(X.rows(), b);
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        total += softplus(z[i]) - y[i] * z[i];
    return total / static_cast<double>(X.rows()) + 0.5 * lambda * w.squaredNorm();
}

struct RawGradient {
    Eigen::VectorXd weights;
    double bias;
};

RawGradient gradient_at(const Eigen::VectorXd& w, double b, double lambda,
                        const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    Eigen::VectorXd p(n);
    const Eigen::VectorXd z = X * w + Eigen::VectorXd::Constant(n, b);
    for (Eigen::Index i = 0; i < n; ++i)
        p[i] = stable_sigmoid(z[i]);
    const Eigen::VectorXd residual = p - y;
    RawGradient grad;
    grad.weights = X.transpose() * residual / static_cast<double>(n) + lambda * w;
    grad.bias = residual.mean();
    return grad;
}

}  // namespace

LogisticModel lr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const LrOptions& options, std::vector<double>* loss_history) {
    check_lr_inputs(X, y);
    if (options.epochs < 1)
        throw ConfigInvalid("lr_train: epochs must be >= 1");
    if (options.learning_rate <= 0.0)
        throw ConfigInvalid("lr_train: learning rate must be > 0");
    if (options.lambda < 0.0)
        throw ConfigInvalid("lr_train: lambda must be >= 0");

    LogisticModel model;
    model.weights = Eigen::VectorXd::Zero(X.cols());
    model.bias = 0.0;
    model.lambda = options.lambda;
    model.seed = options.seed;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        const double loss = loss_at(model.weights, model.bias, options.lambda, X, y);
        if (!std::isfinite(loss))
            throw NonFiniteLoss("lr_train: loss diverged at epoch " + std::to_string(epoch) +
                                "; lower the learning rate");
        if (loss_history)
            loss_history->push_back(loss);
        RawGradient grad = gradient_at(model.weights, model.bias, options.lambda, X, y);
        model.weights -= options.learning_rate * grad.weights;
        model.bias -= options.learning_rate * grad.bias;
    }

    const double final_loss = loss_at(model.weights, model.bias, options.lambda, X, y);
    if (!std::isfinite(final_loss))
        throw NonFiniteLoss("lr_train: final loss is not finite");
    if (loss_history)
        loss_history->push_back(final_loss);
    return model;
}

double lr_predict_proba(const LogisticModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.weights.size())
        throw DimensionMismatch("lr_predict_proba: vector length " + std::to_string(x.size()) +
                                " does not match model length " +
                                std::to_string(model.weights.size()));
    return stable_sigmoid(model.weights.dot(x) + model.bias);
}

LrGradient lr_gradient(const LogisticModel& model, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y) {
    check_lr_inputs(X, y);
    if (X.cols() != model.weights.size())
        throw DimensionMismatch("lr_gradient: feature count mismatch");
    RawGradient grad = gradient_at(model.weights, model.bias, model.lambda, X, y);
    return {std::move(grad.weights), grad.bias};
}

double lr_loss(const LogisticModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    check_lr_inputs(X, y);
    if (X.cols() != model.weights.size())
        throw DimensionMismatch("lr_loss: feature count mismatch");
    return loss_at(model.weights, model.bias, model.lambda, X, y);
}

}  // namespace secpatch
