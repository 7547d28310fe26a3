#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "facesim/image.hpp"
#include "facesim/rng.hpp"

namespace facesim {

// PCA face space: orthonormal basis over centered rasters, eigenvalues in
// non-increasing order, and the residual variance scale used by the
// distance-from-face-space term.
struct EigenModel {
  int width = 0;
  int height = 0;
  Eigen::VectorXd mean;         // D = width*height
  Eigen::VectorXd eigenvalues;  // M entries, lambda_1 >= ... >= lambda_M > 0
  Eigen::MatrixXd basis;        // D x M, orthonormal columns
  double rho = 0.0;             // mean of discarded eigenvalues, floored

  int dim() const { return width * height; }
  int components() const { return static_cast<int>(eigenvalues.size()); }
};

struct Projection {
  Eigen::VectorXd coeffs;  // y_1..y_M
  double residual = 0.0;   // Euclidean distance from the face space
};

// Intrapersonal / extrapersonal difference spaces; both zero-mean by
// construction (a difference and its negation are the same observation).
struct DualSpaceModel {
  EigenModel intra;
  EigenModel extra;
};

struct IdentityImages {
  std::string name;
  std::vector<FaceImage> images;
};
using LabeledImages = std::vector<IdentityImages>;

// Snapshot-method PCA over the sample covariance (unbiased, divisor n-1).
// Eigenvector signs are fixed so each one's first nonzero entry is positive,
// making retraining bit-identical.
EigenModel train_pca(const std::vector<FaceImage>& images, int components);

// PCA over raw vectors; zero_mean skips centering and fixes mean = 0
// (divisor n). Used for difference spaces.
EigenModel train_pca_vectors(const std::vector<Eigen::VectorXd>& data, int components, int width,
                             int height, bool zero_mean);

Projection project(const EigenModel& model, const FaceImage& image);
Projection project_vector(const EigenModel& model, const Eigen::VectorXd& x);

// Face Detection Score: Gaussian face-space log-likelihood
//   log P(x) = -1/2 sum y_i^2/lambda_i - (M/2) ln 2pi - 1/2 sum ln lambda_i
//              - eps(x)^2 / (2 rho).
// literal_epsilon replaces the residual factor with multiplication by
// eps(x) itself (+ ln eps in log domain), for fidelity experiments.
double fds(const EigenModel& model, const FaceImage& image, bool literal_epsilon = false);

// Trains the intrapersonal space on all same-identity pairwise differences
// and the extrapersonal space on an equal-size seeded sample of
// cross-identity differences. Differences are sign-normalized (first nonzero
// entry positive) before training.
DualSpaceModel train_dual(const LabeledImages& gallery, int m_intra, int m_extra,
                          std::uint64_t seed);

// Dual-space similarity: S_T = -[intra Mahalanobis + eps_I^2/(2 rho_I)]
//                              +[extra Mahalanobis + eps_E^2/(2 rho_E)]
// of the sign-normalized difference a-b. Symmetric; exactly 0 for a == b.
double similarity_st(const DualSpaceModel& dual, const FaceImage& a, const FaceImage& b);

// Flat binary model file, little-endian f64 payload. Layout:
//   magic "FSEIGMDL" | u32 width | u32 height | u32 M | u32 zero | f64 rho
//   | mean[D] | eigenvalues[M] | basis rows, eigenvector-major [M*D]
void save_model(const EigenModel& model, const std::filesystem::path& path);
EigenModel load_model(const std::filesystem::path& path);

}  // namespace facesim
