#include "vortex/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

FloquetSpectrum summarize(std::vector<cplx> values, double trivial_tolerance) {
  FloquetSpectrum s;
  s.multipliers = std::move(values);
  std::stable_sort(s.multipliers.begin(), s.multipliers.end(),
                   [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  s.stable = true;
  for (const cplx& m : s.multipliers) {
    s.max_magnitude = std::max(s.max_magnitude, std::abs(m));
    if (std::abs(m - 1.0) < trivial_tolerance)
      ++s.trivial_cluster_size;
    else if (std::abs(m) > kStabilityThreshold)
      s.stable = false;
  }
  return s;
}

constexpr double kLiftAbove = 1e3;      // growth where the direct eigenvalues degrade
constexpr double kGroupGrowth = 30.0;   // target growth of one group
constexpr double kClusterTolerance = 1e-4;

// Eigenvalues of the cyclic matrix with blocks G_0..G_{K-1} are the K-th roots
// of the multipliers, each multiplier appearing once per root. The roots are
// raised back to the K-th power and the K copies averaged.
std::optional<std::vector<cplx>> lifted(const std::vector<Eigen::MatrixXd>& groups) {
  const Eigen::Index d = groups.front().rows();
  const int K = static_cast<int>(groups.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(K * d, K * d);
  for (int g = 0; g < K; ++g) C.block(((g + 1) % K) * d, g * d, d, d) = groups[static_cast<std::size_t>(g)];
  const Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) return std::nullopt;

  std::vector<cplx> w;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cplx p = 1.0;
    for (int k = 0; k < K; ++k) p *= es.eigenvalues()[i];
    w.push_back(p);
  }
  std::sort(w.begin(), w.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });

  std::vector<bool> used(w.size(), false);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = i; j < w.size(); ++j)
      if (!used[j] && std::abs(w[j] - w[i]) <= kClusterTolerance * std::abs(w[i])) members.push_back(j);
    if (members.size() % static_cast<std::size_t>(K) != 0) return std::nullopt;
    cplx mean = 0.0;
    for (std::size_t j : members) {
      used[j] = true;
      mean += w[j];
    }
    mean /= static_cast<double>(members.size());
    out.insert(out.end(), members.size() / static_cast<std::size_t>(K), mean);
  }
  if (static_cast<Eigen::Index>(out.size()) != d) return std::nullopt;
  return out;
}

}  // namespace

FloquetSpectrum multipliers(const Eigen::MatrixXd& monodromy, double trivial_tolerance) {
  const Eigen::EigenSolver<Eigen::MatrixXd> es(monodromy, false);
  std::vector<cplx> v;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()[i]);
  return summarize(std::move(v), trivial_tolerance);
}

FloquetSpectrum multipliers(const std::vector<Eigen::MatrixXd>& factors, double trivial_tolerance) {
  if (factors.empty()) throw PreconditionError("no monodromy factors");
  const Eigen::Index d = factors.front().rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(d, d);
  for (const auto& f : factors) M = f * M;
  FloquetSpectrum direct = multipliers(M, trivial_tolerance);
  if (direct.max_magnitude < kLiftAbove || factors.size() < 2) return direct;

  const int N = static_cast<int>(factors.size());
  const int K = std::clamp(static_cast<int>(std::ceil(std::log(direct.max_magnitude) / std::log(kGroupGrowth))),
                           2, N);
  std::vector<Eigen::MatrixXd> groups;
  for (int g = 0; g < K; ++g) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(d, d);
    for (int i = g * N / K; i < (g + 1) * N / K; ++i) G = factors[static_cast<std::size_t>(i)] * G;
    groups.push_back(std::move(G));
  }
  if (auto v = lifted(groups)) return summarize(std::move(*v), trivial_tolerance);
  return direct;
}

PairingDefects pairing_defects(const std::vector<cplx>& multipliers) {
  PairingDefects out;
  cplx prod = 1.0;
  for (const cplx& m : multipliers) prod *= m;
  out.product = std::abs(prod - 1.0);

  std::vector<cplx> rest = multipliers;
  std::sort(rest.begin(), rest.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  while (rest.size() > 1) {
    const cplx mu = rest.front();
    rest.erase(rest.begin());
    std::size_t best = 0;
    for (std::size_t j = 1; j < rest.size(); ++j)
      if (std::abs(mu * rest[j] - 1.0) < std::abs(mu * rest[best] - 1.0)) best = j;
    out.pairing = std::max(out.pairing, std::abs(mu * rest[best] - 1.0));
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (!rest.empty()) out.pairing = std::max(out.pairing, std::abs(rest.front() * rest.front() - 1.0));
  return out;
}

Stability classify(const FloquetSpectrum& spectrum) {
  return spectrum.stable ? Stability::Stable : Stability::Unstable;
}

const char* to_string(Stability s) { return s == Stability::Stable ? "S" : "U"; }

}  // namespace vortex
