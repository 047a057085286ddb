#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "secpatch/textview.hpp"

namespace secpatch {

// Multinomial Naive Bayes over term counts, two classes. exp(log_prior)
// sums to 1 and, per class, exp(log_likelihood) over all terms sums to 1.
struct NaiveBayesModel {
    Eigen::Vector2d log_prior;       // index 0 = class 0, index 1 = class 1
    Eigen::MatrixXd log_likelihood;  // 2 x V
    double alpha = 1.0;
    int vocab_size = 0;

    friend bool operator==(const NaiveBayesModel& a, const NaiveBayesModel& b) {
        return a.alpha == b.alpha && a.vocab_size == b.vocab_size &&
               (a.log_prior.array() == b.log_prior.array()).all() &&
               a.log_likelihood.rows() == b.log_likelihood.rows() &&
               a.log_likelihood.cols() == b.log_likelihood.cols() &&
               (a.log_likelihood.array() == b.log_likelihood.array()).all();
    }
};

// log_prior_c = log(count_c / N);
// log_likelihood_{c,t} = log((term count + alpha) / (class total + alpha*V)).
// Throws EmptyInput, SingleClassInput, ConfigInvalid (alpha <= 0 or V < 1),
// IndexOutOfVocabulary.
NaiveBayesModel nb_train(const std::vector<SparseVector>& xs, const std::vector<int>& ys,
                         int vocab_size, double alpha);

// Posterior of class 1 via log-sum-exp normalization.
double nb_predict_proba(const NaiveBayesModel& model, const SparseVector& x);

// L2-regularized logistic regression; bias unregularized.
struct LogisticModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    double lambda = 0.0;
    std::uint64_t seed = 0;  // echoed; training is deterministic full-batch

    friend bool operator==(const LogisticModel& a, const LogisticModel& b) {
        return a.bias == b.bias && a.lambda == b.lambda && a.seed == b.seed &&
               a.weights.size() == b.weights.size() &&
               (a.weights.array() == b.weights.array()).all();
    }
};

struct LrOptions {
    double lambda = 1e-2;
    double learning_rate = 0.1;
    int epochs = 500;
    std::uint64_t seed = 0;
};

struct LrGradient {
    Eigen::VectorXd weights;
    double bias;
};

// Full-batch gradient descent on mean cross-entropy + (lambda/2)*||w||^2,
// weights initialized to 0. Rows of X are examples; y holds 0/1 labels.
// Per-epoch losses (computed before each step, plus the final loss) are
// appended to loss_history when given. Throws EmptyInput, ConfigInvalid,
// DimensionMismatch, NonFiniteLoss.
LogisticModel lr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const LrOptions& options, std::vector<double>* loss_history = nullptr);

// sigmoid(w.x + b), numerically stable for |z| up to 1e3 and beyond.
double lr_predict_proba(const LogisticModel& model, const Eigen::VectorXd& x);

// Exact analytic gradient of the regularized mean cross-entropy at the
// model's parameters.
LrGradient lr_gradient(const LogisticModel& model, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y);

// Regularized mean cross-entropy loss at the model's parameters.
double lr_loss(const LogisticModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

double stable_sigmoid(double z);

}  // namespace secpatch
