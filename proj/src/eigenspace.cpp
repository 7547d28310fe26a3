#include "facesim/eigenspace.hpp"

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <numbers>

#include "facesim/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

namespace facesim {

namespace {

constexpr double kRhoFloor = 1e-8;
constexpr double kRankTolerance = 1e-10;  // relative to the largest Gram eigenvalue

Eigen::VectorXd image_to_eigen(const FaceImage& img) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(img.size()));
  for (std::size_t i = 0; i < img.size(); ++i) v[static_cast<Eigen::Index>(i)] = img.pixels[i];
  return v;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::fabs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

// Shared snapshot-method core. data columns are the (already centered or
// zero-mean) observations; divisor is n-1 for sample covariance, n for
// known-zero-mean covariance.
void snapshot_pca(const Eigen::MatrixXd& data, int components, double divisor, EigenModel& out) {
  const Eigen::Index n = data.cols();
  const Eigen::MatrixXd gram = data.transpose() * data;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw MathError("Gram matrix eigendecomposition failed");

  // Eigen returns ascending order; walk from the back.
  const Eigen::VectorXd& gram_eigs = solver.eigenvalues();
  const double tol = std::max(gram_eigs[n - 1], 0.0) * kRankTolerance;
  int rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (gram_eigs[i] > tol && gram_eigs[i] > 0.0) ++rank;
  }
  if (rank == 0) throw MathError("training data has zero rank (all samples identical)");
  if (components < 1 || components > rank) {
    throw MathError("component count " + std::to_string(components) +
                    " outside [1, rank=" + std::to_string(rank) + "]");
  }

  out.eigenvalues.resize(components);
  out.basis.resize(data.rows(), components);
  for (int k = 0; k < components; ++k) {
    const Eigen::Index src = n - 1 - k;
    const double gram_eig = gram_eigs[src];
    out.eigenvalues[k] = gram_eig / divisor;
    out.basis.col(k) = data * solver.eigenvectors().col(src) / std::sqrt(gram_eig);
    out.basis.col(k).normalize();
    fix_sign(out.basis.col(k));
  }

  // rho: mean of the discarded (still positive) spectrum, floored
  double discarded_sum = 0.0;
  int discarded_count = 0;
  for (Eigen::Index i = 0; i < n - components; ++i) {
    if (gram_eigs[i] > tol) {
      discarded_sum += gram_eigs[i] / divisor;
      ++discarded_count;
    }
  }
  out.rho = discarded_count > 0 ? std::max(discarded_sum / discarded_count, kRhoFloor) : kRhoFloor;
}

}  // namespace

EigenModel train_pca(const std::vector<FaceImage>& images, int components) {
  if (images.size() < 2) throw MathError("PCA training needs at least 2 images");
  const FaceImage& first = images.front();
  for (const FaceImage& img : images) {
    if (!img.same_dims(first)) throw ImageError("PCA training images must share dimensions");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(first.size());
  const Eigen::Index n = static_cast<Eigen::Index>(images.size());
  Eigen::MatrixXd data(d, n);
  for (Eigen::Index j = 0; j < n; ++j) data.col(j) = image_to_eigen(images[j]);

  EigenModel model;
  model.width = first.width;
  model.height = first.height;
  model.mean = data.rowwise().mean();
  data.colwise() -= model.mean;
  snapshot_pca(data, components, static_cast<double>(n - 1), model);
  return model;
}

EigenModel train_pca_vectors(const std::vector<Eigen::VectorXd>& vectors, int components,
                             int width, int height, bool zero_mean) {
  if (vectors.size() < 2) throw MathError("PCA training needs at least 2 vectors");
  const Eigen::Index d = vectors.front().size();
  if (d != static_cast<Eigen::Index>(width) * height) {
    throw ImageError("vector length does not match stated dimensions");
  }
  Eigen::MatrixXd data(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != d) throw ImageError("PCA training vectors must share dimensions");
    data.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }

  EigenModel model;
  model.width = width;
  model.height = height;
  if (zero_mean) {
    model.mean = Eigen::VectorXd::Zero(d);
    snapshot_pca(data, components, static_cast<double>(vectors.size()), model);
  } else {
    model.mean = data.rowwise().mean();
    data.colwise() -= model.mean;
    snapshot_pca(data, components, static_cast<double>(vectors.size() - 1), model);
  }
  return model;
}

Projection project_vector(const EigenModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.mean.size()) throw ImageError("projection input has wrong dimensions");
  Projection p;
  const Eigen::VectorXd centered = x - model.mean;
  p.coeffs = model.basis.transpose() * centered;
  p.residual = (centered - model.basis * p.coeffs).norm();
  return p;
}

Projection project(const EigenModel& model, const FaceImage& image) {
  if (image.width != model.width || image.height != model.height) {
    throw ImageError("projection image dimensions do not match the model");
  }
  return project_vector(model, image_to_eigen(image));
}

namespace {

double gaussian_log_likelihood(const EigenModel& model, const Projection& p,
                               bool literal_epsilon) {
  double mahal = 0.0;
  double log_det = 0.0;
  for (int i = 0; i < model.components(); ++i) {
    mahal += p.coeffs[i] * p.coeffs[i] / model.eigenvalues[i];
    log_det += std::log(model.eigenvalues[i]);
  }
  double ll = -0.5 * mahal - 0.5 * model.components() * std::log(2.0 * std::numbers::pi) -
              0.5 * log_det;
  if (literal_epsilon) {
    ll += std::log(std::max(p.residual, DBL_MIN));
  } else {
    ll -= p.residual * p.residual / (2.0 * model.rho);
  }
  return ll;
}

}  // namespace

double fds(const EigenModel& model, const FaceImage& image, bool literal_epsilon) {
  return gaussian_log_likelihood(model, project(model, image), literal_epsilon);
}

namespace {

// First nonzero entry positive; differences of 8-bit rasters are exact
// integers so the comparison is unambiguous.
void sign_normalize(Eigen::VectorXd& delta) {
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    if (delta[i] != 0.0) {
      if (delta[i] < 0.0) delta = -delta;
      return;
    }
  }
}

}  // namespace

DualSpaceModel train_dual(const LabeledImages& gallery, int m_intra, int m_extra,
                          std::uint64_t seed) {
  if (gallery.size() < 2) throw MathError("dual-space training needs at least 2 identities");
  const FaceImage* first = nullptr;
  for (const IdentityImages& id : gallery) {
    if (id.images.empty()) throw MathError("identity \"" + id.name + "\" has no images");
    for (const FaceImage& img : id.images) {
      if (!first) first = &img;
      if (!img.same_dims(*first)) throw ImageError("gallery images must share dimensions");
    }
  }

  std::vector<Eigen::VectorXd> intra;
  for (const IdentityImages& id : gallery) {
    for (std::size_t a = 0; a < id.images.size(); ++a) {
      for (std::size_t b = a + 1; b < id.images.size(); ++b) {
        Eigen::VectorXd delta = image_to_eigen(id.images[a]) - image_to_eigen(id.images[b]);
        if (delta.isZero(0.0)) continue;  // duplicate images carry no signal
        sign_normalize(delta);
        intra.push_back(std::move(delta));
      }
    }
  }
  if (intra.size() < 2) {
    throw MathError("gallery yields fewer than 2 intrapersonal difference pairs");
  }

  // same-cardinality extrapersonal sample
  Rng rng(seed);
  std::vector<Eigen::VectorXd> extra;
  extra.reserve(intra.size());
  std::size_t guard = 0;
  while (extra.size() < intra.size()) {
    if (++guard > intra.size() * 100) {
      throw MathError("failed to sample distinct extrapersonal pairs");
    }
    const std::size_t ia = uniform_index(rng, gallery.size());
    const std::size_t ib = uniform_index(rng, gallery.size());
    if (ia == ib) continue;
    const auto& va = gallery[ia].images;
    const auto& vb = gallery[ib].images;
    Eigen::VectorXd delta = image_to_eigen(va[uniform_index(rng, va.size())]) -
                            image_to_eigen(vb[uniform_index(rng, vb.size())]);
    if (delta.isZero(0.0)) continue;
    sign_normalize(delta);
    extra.push_back(std::move(delta));
  }

  DualSpaceModel dual;
  dual.intra = train_pca_vectors(intra, m_intra, first->width, first->height, true);
  dual.extra = train_pca_vectors(extra, m_extra, first->width, first->height, true);
  return dual;
}

double similarity_st(const DualSpaceModel& dual, const FaceImage& a, const FaceImage& b) {
  if (!a.same_dims(b)) throw ImageError("similarity operands must share dimensions");
  Eigen::VectorXd delta = image_to_eigen(a) - image_to_eigen(b);
  sign_normalize(delta);

  const auto bracket = [&delta](const EigenModel& m) {
    const Projection p = project_vector(m, delta);
    double mahal = 0.0;
    for (int i = 0; i < m.components(); ++i) {
      mahal += p.coeffs[i] * p.coeffs[i] / m.eigenvalues[i];
    }
    return mahal + p.residual * p.residual / (2.0 * m.rho);
  };

  return -bracket(dual.intra) + bracket(dual.extra);
}

namespace {

constexpr char kModelMagic[8] = {'F', 'S', 'E', 'I', 'G', 'M', 'D', 'L'};

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void save_model(const EigenModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write model file " + path.string());
  out.write(kModelMagic, sizeof kModelMagic);
  write_u32(out, static_cast<std::uint32_t>(model.width));
  write_u32(out, static_cast<std::uint32_t>(model.height));
  write_u32(out, static_cast<std::uint32_t>(model.components()));
  write_u32(out, 0);
  out.write(reinterpret_cast<const char*>(&model.rho), sizeof model.rho);
  out.write(reinterpret_cast<const char*>(model.mean.data()),
            static_cast<std::streamsize>(model.mean.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(model.eigenvalues.data()),
            static_cast<std::streamsize>(model.eigenvalues.size() * sizeof(double)));
  for (int k = 0; k < model.components(); ++k) {
    const Eigen::VectorXd col = model.basis.col(k);
    out.write(reinterpret_cast<const char*>(col.data()),
              static_cast<std::streamsize>(col.size() * sizeof(double)));
  }
  if (!out) throw ManifestError("I/O failure writing model " + path.string());
}

EigenModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open model file " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + 8, kModelMagic)) {
    throw ManifestError("bad model magic in " + path.string());
  }
  EigenModel model;
  model.width = static_cast<int>(read_u32(in));
  model.height = static_cast<int>(read_u32(in));
  const int m = static_cast<int>(read_u32(in));
  read_u32(in);
  in.read(reinterpret_cast<char*>(&model.rho), sizeof model.rho);
  if (!in || model.width <= 0 || model.height <= 0 || m <= 0) {
    throw ManifestError("bad model header in " + path.string());
  }
  const Eigen::Index d = static_cast<Eigen::Index>(model.width) * model.height;
  model.mean.resize(d);
  model.eigenvalues.resize(m);
  model.basis.resize(d, m);
  in.read(reinterpret_cast<char*>(model.mean.data()),
          static_cast<std::streamsize>(d * sizeof(double)));
  in.read(reinterpret_cast<char*>(model.eigenvalues.data()),
          static_cast<std::streamsize>(m * sizeof(double)));
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd col(d);
    in.read(reinterpret_cast<char*>(col.data()), static_cast<std::streamsize>(d * sizeof(double)));
    model.basis.col(k) = col;
  }
  if (!in) throw ManifestError("truncated model file " + path.string());
  return model;
}

}  // namespace facesim
