// SPDX-License-Identifier: Apache-2.0
//
// ncprec - downlink precoding under improper Gaussian jamming
// Copyright (C) 2026 The ncprec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ncprec/blp.hpp"

#include "ncprec/errors.hpp"

#include <cmath>

namespace ncprec
{
namespace
{

void check_sizes(const CMat &channels, std::size_t n)
{
    if (channels.rows() < 1 || channels.cols() < 1)
        throw InvalidArgument("empty channel matrix");
    if (static_cast<std::size_t>(channels.rows()) != n)
        throw InvalidArgument("one entry per user required");
}

std::vector<SymMat2> scaled_identities(const std::vector<double> &vars)
{
    std::vector<SymMat2> covs;
    covs.reserve(vars.size());
    for (double v : vars)
        covs.push_back(SymMat2::identity(0.5 * v));
    return covs;
}

} // namespace

StackedWhitenedChannel stack_whitened(const CMat &channels, const std::vector<SymMat2> &covs)
{
    check_sizes(channels, covs.size());
    const auto k = channels.rows();
    const auto m = channels.cols();
    StackedWhitenedChannel h_e(2 * k, 2 * m);
    for (Eigen::Index u = 0; u < k; ++u)
    {
        const RMat w = sqrt_inv_psd2(covs[u]) * expand_row(channels.row(u));
        h_e.row(u) = w.row(0);
        h_e.row(k + u) = w.row(1);
    }
    return h_e;
}

LinearPrecoder mmse_blp(const StackedWhitenedChannel &h_e, double p_t, int k)
{
    if (!(p_t > 0.0))
        throw InvalidArgument("mmse_blp: power budget must be positive");
    const auto n = h_e.cols();
    const double a = 2.0 * k / p_t;
    const RMat gram = h_e.transpose() * h_e + a * RMat::Identity(n, n);
    const RMat delta = gram.llt().solve(RMat::Identity(n, n));
    const RMat dh = delta * h_e.transpose();

    LinearPrecoder pc;
    pc.beta = std::sqrt(2.0 * p_t / dh.squaredNorm()); // tr{D H^T H D} = ||D H^T||_F^2
    pc.p = pc.beta * dh;
    pc.power_budget = p_t;
    return pc;
}

LinearPrecoder pw_blp(const CMat &channels, const std::vector<SymMat2> &covs, double p_t)
{
    return mmse_blp(stack_whitened(channels, covs), p_t, static_cast<int>(channels.rows()));
}

LinearPrecoder robust_blp(const CMat &channels, const std::vector<double> &awgn_vars,
                          const std::vector<double> &jammer_powers, double p_t)
{
    if (awgn_vars.size() != jammer_powers.size())
        throw InvalidArgument("robust_blp: size mismatch");
    std::vector<double> total(awgn_vars.size());
    for (std::size_t i = 0; i < total.size(); ++i)
        total[i] = awgn_vars[i] + jammer_powers[i];
    return pw_blp(channels, scaled_identities(total), p_t);
}

LinearPrecoder naive_blp(const CMat &channels, const std::vector<double> &awgn_vars, double p_t)
{
    return pw_blp(channels, scaled_identities(awgn_vars), p_t);
}

double mse_closed_form(const CMat &channels, const std::vector<SymMat2> &covs, double p_t)
{
    check_sizes(channels, covs.size());
    if (!(p_t > 0.0))
        throw InvalidArgument("mse_closed_form: power budget must be positive");
    const auto k = channels.rows();
    const auto m = channels.cols();
    const double a = 2.0 * static_cast<double>(k) / p_t;

    RMat d = RMat::Identity(2 * m, 2 * m);
    for (Eigen::Index u = 0; u < k; ++u)
    {
        const Eig2 e = eig2_sym(covs[u]);
        if (!(e.lambda2 > 0.0))
            throw NotPositiveDefinite("mse_closed_form: covariance is not positive definite");
        const RMat hb = expand_row(channels.row(u));
        d += hb.transpose() * covs[u].matrix().inverse() * hb / a;
    }
    const RMat dinv = d.llt().solve(RMat::Identity(2 * m, 2 * m));
    return static_cast<double>(k - m) + 0.5 * dinv.trace();
}

double mse_mismatched(const CMat &channels, const std::vector<SymMat2> &design_covs,
                      const std::vector<SymMat2> &true_covs, double p_t)
{
    check_sizes(channels, true_covs.size());
    const auto k = channels.rows();
    const StackedWhitenedChannel h_e = stack_whitened(channels, design_covs);
    const LinearPrecoder pc = mmse_blp(h_e, p_t, static_cast<int>(k));

    const RMat err = h_e * pc.p / pc.beta - RMat::Identity(2 * k, 2 * k);
    double noise = 0.0;
    for (Eigen::Index u = 0; u < k; ++u)
    {
        const Mat2 w = sqrt_inv_psd2(design_covs[u]);
        noise += (w * true_covs[u].matrix() * w.transpose()).trace();
    }
    return 0.5 * err.squaredNorm() + noise / (pc.beta * pc.beta);
}

StationarityResidual blp_stationarity(const StackedWhitenedChannel &h_e, const LinearPrecoder &pc)
{
    const double b = pc.beta;
    const double k = static_cast<double>(h_e.rows()) / 2.0;
    const RMat base = -h_e.transpose() / b + h_e.transpose() * h_e * pc.p / (b * b);

    StationarityResidual r;
    r.lambda = -(base.cwiseProduct(pc.p)).sum() / pc.p.squaredNorm();
    r.p_residual = (base + r.lambda * pc.p).cwiseAbs().maxCoeff();
    const RMat hp = h_e * pc.p;
    r.beta_residual = std::abs(b * hp.trace() - hp.squaredNorm() - 4.0 * k);
    return r;
}

} // namespace ncprec
