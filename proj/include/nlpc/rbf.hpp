#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "nlpc/dsp.hpp"

namespace nlpc {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

// Gaussian radial transfer function, exp(-n^2). Unit output at n = 0 and
// 0.5 at |n| = 0.8326.
double radbas(double n);

// Bias that makes a neuron output 0.5 at the given center distance.
double spread_to_bias(double spread);

// One radial layer of S Gaussian neurons feeding a single linear output.
// Neuron i computes radbas(|centers.row(i) - x| * biases[i]).
struct RbfNetwork {
  Eigen::MatrixXd centers;      // S x D
  Eigen::VectorXd biases;       // S, all positive
  Eigen::VectorXd out_weights;  // S
  double out_bias = 0.0;

  int size() const { return static_cast<int>(centers.rows()); }
  int input_dim() const { return static_cast<int>(centers.cols()); }
};

double rbf_forward(const RbfNetwork& net, std::span<const double> x);
double rbf_forward(const RbfNetwork& net, const Eigen::VectorXd& x);

// Minimum-norm least-squares solution of design * w = targets. Rank
// deficiency is not an error.
Eigen::VectorXd solve_output_layer(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets);

struct Rbf1Options {
  int max_neurons = 20;
  double spread = 0.22;
  double goal_mse = 0.0;  // stop early once training MSE falls this low
};

struct Rbf1Result {
  RbfNetwork network;
  std::vector<double> mse_history;  // training MSE after each committed neuron
};

// Greedy center selection: at every step each training vector not yet a
// center is tried as a new neuron, the output layer is re-solved by least
// squares, and the candidate with the lowest training MSE is committed.
// Commits at most max_neurons (or the number of distinct inputs, if fewer).
Rbf1Result train_rbf1(const TrainingSet& data, const Rbf1Options& opts);

// Lloyd's algorithm from a seeded random subset of the points. Empty
// clusters are re-seeded to the point farthest from its assigned center.
Eigen::MatrixXd kmeans(const Eigen::MatrixXd& points, int k, int iters, std::uint64_t seed);

// Isotropic Gaussian mixture: one scalar variance per component.
struct GmmModel {
  Eigen::MatrixXd means;           // S x D
  Eigen::VectorXd variances;       // S, floored at 1e-8
  Eigen::VectorXd mixing_weights;  // S, sums to 1
};

struct GmmFit {
  GmmModel model;
  std::vector<double> log_likelihood;  // one entry per epoch, non-decreasing
};

GmmFit em_gmm_circular(const Eigen::MatrixXd& points, int k, int epochs, std::uint64_t seed,
                       int kmeans_iters = 5);

struct Rbf2Options {
  int neurons = 20;
  int em_epochs = 10;
  int kmeans_iters = 5;
  bool output_bias = true;
};

// Clustering-based training: centers from an EM-fitted circular Gaussian
// mixture, one shared width from the largest inter-center distance, output
// layer from the least-squares pseudo-inverse solution.
RbfNetwork train_rbf2(const TrainingSet& data, const Rbf2Options& opts, std::uint64_t seed);

}  // namespace nlpc
