#include "mlipuq/features.hpp"

#include "mlipuq/coulomb.hpp"
#include "mlipuq/errors.hpp"

namespace mlipuq {

std::size_t sample_count(const FeatureSet &fs) {
  if (const auto *g = std::get_if<GlobalFeatures>(&fs))
    return static_cast<std::size_t>(g->values.rows());
  return std::get<AtomisticFeatures>(fs).environments.size();
}

Eigen::Index feature_dim(const FeatureSet &fs) {
  if (const auto *g = std::get_if<GlobalFeatures>(&fs)) {
    if (g->values.rows() == 0)
      throw ContractViolation("feature_dim: empty feature set");
    return g->values.cols();
  }
  const auto &a = std::get<AtomisticFeatures>(fs);
  if (a.environments.empty())
    throw ContractViolation("feature_dim: empty feature set");
  return a.environments.front().cols();
}

FeatureSet take(const FeatureSet &fs, const std::vector<std::size_t> &indices) {
  const std::size_t n = sample_count(fs);
  for (std::size_t i : indices)
    if (i >= n) throw ContractViolation("take: index out of range");
  if (const auto *g = std::get_if<GlobalFeatures>(&fs)) {
    GlobalFeatures out;
    out.values.resize(static_cast<Eigen::Index>(indices.size()), g->values.cols());
    for (std::size_t r = 0; r < indices.size(); ++r)
      out.values.row(static_cast<Eigen::Index>(r)) =
          g->values.row(static_cast<Eigen::Index>(indices[r]));
    return out;
  }
  const auto &a = std::get<AtomisticFeatures>(fs);
  AtomisticFeatures out;
  out.environments.reserve(indices.size());
  for (std::size_t i : indices) out.environments.push_back(a.environments[i]);
  return out;
}

FeatureSet concat(const FeatureSet &a, const FeatureSet &b) {
  if (a.index() != b.index())
    throw ContractViolation("concat: mixed representation kinds");
  if (const auto *ga = std::get_if<GlobalFeatures>(&a)) {
    const auto &gb = std::get<GlobalFeatures>(b);
    if (ga->values.rows() > 0 && gb.values.rows() > 0 &&
        ga->values.cols() != gb.values.cols())
      throw ContractViolation("concat: feature dimension mismatch");
    GlobalFeatures out;
    out.values.resize(ga->values.rows() + gb.values.rows(),
                      ga->values.rows() > 0 ? ga->values.cols() : gb.values.cols());
    out.values.topRows(ga->values.rows()) = ga->values;
    out.values.bottomRows(gb.values.rows()) = gb.values;
    return out;
  }
  const auto &aa = std::get<AtomisticFeatures>(a);
  const auto &ab = std::get<AtomisticFeatures>(b);
  AtomisticFeatures out;
  out.environments = aa.environments;
  out.environments.insert(out.environments.end(), ab.environments.begin(),
                          ab.environments.end());
  return out;
}

FeatureSet single_global(const Eigen::VectorXd &x) {
  GlobalFeatures g;
  g.values = x.transpose();
  return g;
}

GlobalFeatures coulomb_features(const Dataset &ds) {
  validate_consistent(ds);
  if (ds.structures.empty())
    throw ContractViolation("coulomb_features: empty dataset");
  GlobalFeatures out;
  const Eigen::VectorXd first = coulomb_feature(ds.structures.front());
  out.values.resize(static_cast<Eigen::Index>(ds.size()), first.size());
  out.values.row(0) = first;
  for (std::size_t i = 1; i < ds.size(); ++i)
    out.values.row(static_cast<Eigen::Index>(i)) = coulomb_feature(ds.structures[i]);
  return out;
}

AtomisticFeatures soap_features(const Dataset &ds, const SoapConfig &cfg) {
  if (ds.structures.empty())
    throw ContractViolation("soap_features: empty dataset");
  SoapCalculator calc(cfg);
  AtomisticFeatures out;
  out.environments.reserve(ds.size());
  for (const auto &s : ds.structures) {
    const auto per_atom = calc.features(s);
    Eigen::MatrixXd env(static_cast<Eigen::Index>(per_atom.size()),
                        cfg.feature_dim());
    for (std::size_t a = 0; a < per_atom.size(); ++a)
      env.row(static_cast<Eigen::Index>(a)) = per_atom[a];
    out.environments.push_back(std::move(env));
  }
  return out;
}

Eigen::VectorXd energies(const Dataset &ds) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!ds.structures[i].energy)
      throw ContractViolation("energies: structure " + std::to_string(i) +
                              " has no energy label");
    y[static_cast<Eigen::Index>(i)] = *ds.structures[i].energy;
  }
  return y;
}

}  // namespace mlipuq
