#include "nlpc/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

// Squared Euclidean distances between every row of a and every row of b.
Eigen::MatrixXd pairwise_sq_dist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::VectorXd na = a.rowwise().squaredNorm();
  Eigen::VectorXd nb = b.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * (a * b.transpose());
  d.colwise() += na;
  d.rowwise() += nb.transpose();
  return d.cwiseMax(0.0);
}

// Sample k distinct indices from [0, n) with a partial Fisher-Yates shuffle.
std::vector<int> sample_indices(int n, int k, std::mt19937_64& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace

double radbas(double n) { return std::exp(-n * n); }

double spread_to_bias(double spread) {
  if (!(spread > 0.0)) throw std::invalid_argument("spread_to_bias: spread must be positive");
  return 0.8326 / spread;
}

double rbf_forward(const RbfNetwork& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_dim())
    throw std::invalid_argument("rbf_forward: input dimension mismatch");
  double acc = net.out_bias;
  for (int i = 0; i < net.size(); ++i) {
    double d2 = 0.0;
    for (int j = 0; j < net.input_dim(); ++j) {
      const double diff = net.centers(i, j) - x[static_cast<std::size_t>(j)];
      d2 += diff * diff;
    }
    const double b = net.biases(i);
    acc += net.out_weights(i) * std::exp(-(b * b) * d2);
  }
  return acc;
}

double rbf_forward(const RbfNetwork& net, const Eigen::VectorXd& x) {
  return rbf_forward(net, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

Eigen::VectorXd solve_output_layer(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
  if (design.rows() == 0) throw std::invalid_argument("solve_output_layer: empty system");
  if (design.rows() != targets.size())
    throw std::invalid_argument("solve_output_layer: design/target row mismatch");
  return design.completeOrthogonalDecomposition().solve(targets);
}

Rbf1Result train_rbf1(const TrainingSet& data, const Rbf1Options& opts) {
  const Eigen::Index n = data.inputs.rows();
  const Eigen::Index dim = data.inputs.cols();
  if (n == 0) throw std::invalid_argument("train_rbf1: empty training set");
  if (opts.max_neurons < 1) throw std::invalid_argument("train_rbf1: max_neurons must be >= 1");
  const double bias = spread_to_bias(opts.spread);

  // Candidates are the distinct input vectors; duplicates share a column.
  std::vector<Eigen::Index> reps;
  {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (data.inputs(a, j) != data.inputs(b, j)) return data.inputs(a, j) < data.inputs(b, j);
      }
      return a < b;
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i == 0 || data.inputs.row(order[i]) != data.inputs.row(order[i - 1]))
        reps.push_back(order[i]);
    }
    std::sort(reps.begin(), reps.end());
  }
  const Eigen::Index cand = static_cast<Eigen::Index>(reps.size());
  const int target_neurons = std::min<int>(opts.max_neurons, static_cast<int>(cand));

  // Activation of every training row at every candidate center.
  Eigen::MatrixXd cand_rows(cand, dim);
  for (Eigen::Index c = 0; c < cand; ++c) cand_rows.row(c) = data.inputs.row(reps[static_cast<std::size_t>(c)]);
  Eigen::MatrixXd phi = pairwise_sq_dist(data.inputs, cand_rows);
  phi = (-(bias * bias) * phi.array()).exp();

  // Orthonormal basis of the committed design columns; the constant column
  // (output bias) is in from the start. For each candidate we track the
  // squared norm of its component orthogonal to the basis (u) and its
  // correlation with the current residual (w): re-solving the output layer
  // with candidate c added leaves a residual of rss - w_c^2/u_c.
  Eigen::MatrixXd basis(n, target_neurons + 1);
  basis.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  int basis_cols = 1;

  Eigen::VectorXd residual = data.targets;
  {
    const double proj = basis.col(0).dot(residual);
    residual -= proj * basis.col(0);
  }
  double rss = residual.squaredNorm();

  Eigen::VectorXd col_norm2 = phi.colwise().squaredNorm();
  Eigen::VectorXd u = col_norm2 - (phi.transpose() * basis.col(0)).array().square().matrix();
  Eigen::VectorXd w = phi.transpose() * residual;
  std::vector<char> alive(static_cast<std::size_t>(cand), 1);

  Rbf1Result res;
  std::vector<Eigen::Index> chosen;
  while (static_cast<int>(chosen.size()) < target_neurons) {
    int best = -1;
    double best_gain = -1.0;
    for (Eigen::Index c = 0; c < cand; ++c) {
      if (!alive[static_cast<std::size_t>(c)]) continue;
      const double thresh = 1e-12 * col_norm2(c);
      const double gain = u(c) > thresh ? (w(c) * w(c)) / u(c) : 0.0;
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(c);
      }
    }
    if (best < 0) break;
    alive[static_cast<std::size_t>(best)] = 0;
    chosen.push_back(static_cast<Eigen::Index>(best));

    // Orthogonalize the committed column against the basis (twice, for
    // numerical hygiene) and fold it in unless it is linearly dependent.
    Eigen::VectorXd q = phi.col(best);
    auto active = basis.leftCols(basis_cols);
    q -= active * (active.transpose() * q);
    q -= active * (active.transpose() * q);
    const double qn2 = q.squaredNorm();
    if (qn2 > 1e-12 * col_norm2(best)) {
      q /= std::sqrt(qn2);
      basis.col(basis_cols) = q;
      ++basis_cols;
      const double rho = q.dot(residual);
      residual -= rho * q;
      rss = std::max(rss - rho * rho, 0.0);
      Eigen::VectorXd g = phi.transpose() * q;
      u -= g.array().square().matrix();
      w -= rho * g;
    }
    res.mse_history.push_back(rss / static_cast<double>(n));
    // goal_mse of 0 never stops early (fixed-neuron-count experiments).
    if (opts.goal_mse > 0.0 && rss / static_cast<double>(n) <= opts.goal_mse) break;
  }

  const int s = static_cast<int>(chosen.size());
  RbfNetwork& net = res.network;
  net.centers.resize(s, dim);
  net.biases = Eigen::VectorXd::Constant(s, bias);
  Eigen::MatrixXd design(n, s + 1);
  for (int i = 0; i < s; ++i) {
    net.centers.row(i) = cand_rows.row(chosen[static_cast<std::size_t>(i)]);
    design.col(i) = phi.col(chosen[static_cast<std::size_t>(i)]);
  }
  design.col(s).setOnes();
  Eigen::VectorXd sol = solve_output_layer(design, data.targets);
  net.out_weights = sol.head(s);
  net.out_bias = sol(s);
  return res;
}

Eigen::MatrixXd kmeans(const Eigen::MatrixXd& points, int k, int iters, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1 || static_cast<Eigen::Index>(k) > n)
    throw std::invalid_argument("kmeans: need 1 <= k <= number of points");
  if (iters < 0) throw std::invalid_argument("kmeans: iters must be >= 0");

  std::mt19937_64 rng(seed);
  auto init = sample_indices(static_cast<int>(n), k, rng);
  Eigen::MatrixXd centers(k, points.cols());
  for (int i = 0; i < k; ++i) centers.row(i) = points.row(init[static_cast<std::size_t>(i)]);

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd d2 = pairwise_sq_dist(points, centers);
    for (Eigen::Index i = 0; i < n; ++i) {
      int bestj = 0;
      double bestd = d2(i, 0);
      for (int j = 1; j < k; ++j) {
        if (d2(i, j) < bestd) {
          bestd = d2(i, j);
          bestj = j;
        }
      }
      assign[static_cast<std::size_t>(i)] = bestj;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        centers.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
      } else {
        // Re-seed to the point farthest from its assigned center.
        Eigen::Index far = -1;
        double fard = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (taken[static_cast<std::size_t>(i)]) continue;
          const double d = d2(i, assign[static_cast<std::size_t>(i)]);
          if (d > fard) {
            fard = d;
            far = i;
          }
        }
        if (far >= 0) {
          centers.row(j) = points.row(far);
          taken[static_cast<std::size_t>(far)] = 1;
        }
      }
    }
  }
  return centers;
}

GmmFit em_gmm_circular(const Eigen::MatrixXd& points, int k, int epochs, std::uint64_t seed,
                       int kmeans_iters) {
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  if (k < 1 || static_cast<Eigen::Index>(k) > n)
    throw std::invalid_argument("em_gmm_circular: need 1 <= k <= number of points");
  if (epochs < 1) throw std::invalid_argument("em_gmm_circular: epochs must be >= 1");

  constexpr double kVarFloor = 1e-8;
  std::mt19937_64 rng(seed);

  GmmFit fit;
  GmmModel& m = fit.model;
  m.means = kmeans(points, k, kmeans_iters, rng());
  const Eigen::RowVectorXd grand_mean = points.colwise().mean();
  double grand_var =
      (points.rowwise() - grand_mean).squaredNorm() / static_cast<double>(n * dim);
  grand_var = std::max(grand_var, kVarFloor);
  m.variances = Eigen::VectorXd::Constant(k, grand_var);
  m.mixing_weights = Eigen::VectorXd::Constant(k, 1.0 / k);

  Eigen::MatrixXd resp(n, k);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    // E-step with log-sum-exp for stability.
    Eigen::MatrixXd d2 = pairwise_sq_dist(points, m.means);
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double lw = std::log(std::max(m.mixing_weights(j), 1e-300));
        const double lp = -0.5 * static_cast<double>(dim) *
                              std::log(2.0 * M_PI * m.variances(j)) -
                          d2(i, j) / (2.0 * m.variances(j));
        resp(i, j) = lw + lp;
        mx = std::max(mx, resp(i, j));
      }
      double sum = 0.0;
      for (int j = 0; j < k; ++j) sum += std::exp(resp(i, j) - mx);
      const double lse = mx + std::log(sum);
      loglik += lse;
      for (int j = 0; j < k; ++j) resp(i, j) = std::exp(resp(i, j) - lse);
    }
    fit.log_likelihood.push_back(loglik);

    // M-step.
    for (int j = 0; j < k; ++j) {
      const double nk = resp.col(j).sum();
      if (nk < 1e-12) {
        // Collapsed component: re-seed it on the worst-covered point.
        Eigen::Index far = 0;
        double fard = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          double dmin = d2.row(i).minCoeff();
          if (dmin > fard) {
            fard = dmin;
            far = i;
          }
        }
        m.means.row(j) = points.row(far);
        m.variances(j) = grand_var;
        m.mixing_weights(j) = 1.0 / static_cast<double>(n);
        std::fprintf(stderr, "em_gmm_circular: re-seeded collapsed component %d\n", j);
        continue;
      }
      Eigen::RowVectorXd mu = (resp.col(j).transpose() * points) / nk;
      double var = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        var += resp(i, j) * (points.row(i) - mu).squaredNorm();
      var /= nk * static_cast<double>(dim);
      m.means.row(j) = mu;
      m.variances(j) = std::max(var, kVarFloor);
      m.mixing_weights(j) = nk / static_cast<double>(n);
    }
    const double wsum = m.mixing_weights.sum();
    m.mixing_weights /= wsum;
  }
  return fit;
}

RbfNetwork train_rbf2(const TrainingSet& data, const Rbf2Options& opts, std::uint64_t seed) {
  const Eigen::Index n = data.inputs.rows();
  const Eigen::Index dim = data.inputs.cols();
  if (n == 0) throw std::invalid_argument("train_rbf2: empty training set");
  if (opts.neurons < 1) throw std::invalid_argument("train_rbf2: neurons must be >= 1");
  if (static_cast<Eigen::Index>(opts.neurons) > n)
    throw std::invalid_argument("train_rbf2: more neurons than training vectors");
  if (opts.em_epochs < 1) throw std::invalid_argument("train_rbf2: em_epochs must be >= 1");
  const int s = opts.neurons;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Initialization as stated for the algorithm: normal draws for all
  // weights, unit variances. Every value is superseded by the clustering
  // and least-squares steps below; the draws only advance the seeded stream.
  RbfNetwork net;
  net.centers.resize(s, dim);
  for (Eigen::Index i = 0; i < net.centers.rows(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j) net.centers(i, j) = normal(rng);
  net.out_weights.resize(s);
  for (int i = 0; i < s; ++i) net.out_weights(i) = normal(rng);
  net.out_bias = normal(rng);
  net.biases = Eigen::VectorXd::Ones(s);

  // Centers from the circular-covariance Gaussian mixture.
  GmmFit fit = em_gmm_circular(data.inputs, s, opts.em_epochs, rng(), opts.kmeans_iters);
  net.centers = fit.model.means;

  // One shared width: the largest squared distance between centers. A
  // single center falls back to the mean squared point-to-center distance.
  double sigma2 = 0.0;
  if (s == 1) {
    sigma2 = (data.inputs.rowwise() - net.centers.row(0)).rowwise().squaredNorm().mean();
  } else {
    Eigen::MatrixXd d2 = pairwise_sq_dist(net.centers, net.centers);
    sigma2 = d2.maxCoeff();
  }
  if (sigma2 < 1e-12)
    sigma2 = std::max(
        (data.inputs.rowwise() - net.centers.row(0)).rowwise().squaredNorm().mean(), 1e-12);
  const double bias = 1.0 / std::sqrt(2.0 * sigma2);  // exp(-|w-x|^2 / (2 sigma^2))
  net.biases = Eigen::VectorXd::Constant(s, bias);

  // Output layer via the least-squares pseudo-inverse solution.
  Eigen::MatrixXd act = pairwise_sq_dist(data.inputs, net.centers);
  act = (-(bias * bias) * act.array()).exp();
  const int cols = s + (opts.output_bias ? 1 : 0);
  Eigen::MatrixXd design(n, cols);
  design.leftCols(s) = act;
  if (opts.output_bias) design.col(s).setOnes();
  Eigen::VectorXd sol = solve_output_layer(design, data.targets);
  net.out_weights = sol.head(s);
  net.out_bias = opts.output_bias ? sol(s) : 0.0;
  return net;
}

}  // namespace nlpc
