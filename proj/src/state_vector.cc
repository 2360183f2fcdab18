// Copyright 2026 The stochlre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "stochlre/state_vector.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stochlre {

namespace {

constexpr double kSnap = 1e-12;

struct DensePauli {
    std::uint64_t xmask = 0;
    std::uint64_t zmask = 0;
    cplx phase{1.0, 0.0};
};

DensePauli dense_pauli(const PauliString &p) {
    DensePauli d;
    d.xmask = p.x_words().empty() ? 0 : p.x_words()[0];
    d.zmask = p.z_words().empty() ? 0 : p.z_words()[0];
    // Y = i X Z, so P = sign * i^{#Y} * X^x Z^z with Z acting first.
    static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    d.phase = kIPow[std::popcount(d.xmask & d.zmask) & 3] * static_cast<double>(p.sign());
    return d;
}

std::uint64_t mask_of(std::span<const std::size_t> region, std::size_t n) {
    std::uint64_t m = 0;
    for (auto q : region) {
        if (q >= n) {
            throw std::out_of_range("region site out of range");
        }
        std::uint64_t bit = std::uint64_t{1} << q;
        if (m & bit) {
            throw std::invalid_argument("region lists a site twice");
        }
        m |= bit;
    }
    return m;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::ising_ring(std::size_t n, double gamma_x) {
    if (n < 2) {
        throw std::invalid_argument("ising_ring needs at least two sites");
    }
    HamiltonianSpec h;
    std::size_t edges = n == 2 ? 1 : n;
    for (std::size_t i = 0; i < edges; ++i) {
        h.terms.emplace_back(1.0, PauliString::from_sites(n, {{i, Pauli::Z}, {(i + 1) % n, Pauli::Z}}));
    }
    if (gamma_x != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            h.terms.emplace_back(gamma_x, PauliString::from_sites(n, {{i, Pauli::X}}));
        }
    }
    return h;
}

StateVector::StateVector(std::size_t num_qubits) : n_(num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("dense state supports 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                                    std::to_string(num_qubits));
    }
    amps_.assign(std::size_t{1} << n_, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::product_state(std::size_t num_qubits, ProductBasis basis) {
    StateVector s(num_qubits);
    if (basis == ProductBasis::AllZeroZ) {
        return s;
    }
    double a = std::pow(2.0, -0.5 * static_cast<double>(num_qubits));
    for (std::size_t b = 0; b < s.amps_.size(); ++b) {
        bool odd = basis == ProductBasis::AllMinusX && (std::popcount(b) & 1);
        s.amps_[b] = odd ? -a : a;
    }
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    std::size_t n = static_cast<std::size_t>(std::countr_zero(amps.size()));
    if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    StateVector s(n);
    s.amps_ = std::move(amps);
    if (s.norm() < kSnap) {
        throw std::invalid_argument("zero amplitude vector");
    }
    s.normalize();
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

void StateVector::normalize() {
    double nrm = norm();
    for (auto &a : amps_) {
        a /= nrm;
    }
}

void StateVector::check_site(std::size_t q) const {
    if (q >= n_) {
        throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                                " qubits");
    }
}

void StateVector::check_pauli(const PauliString &p) const {
    if (p.num_qubits() != n_) {
        throw std::invalid_argument("Pauli string size does not match the state");
    }
}

void StateVector::h(std::size_t q) {
    check_site(q);
    std::size_t bit = std::size_t{1} << q;
    const double r = std::numbers::sqrt2 / 2;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        if (b & bit) {
            continue;
        }
        cplx a0 = amps_[b], a1 = amps_[b | bit];
        amps_[b] = r * (a0 + a1);
        amps_[b | bit] = r * (a0 - a1);
    }
}

void StateVector::s(std::size_t q) {
    check_site(q);
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        if (b & bit) {
            amps_[b] *= cplx{0.0, 1.0};
        }
    }
}

void StateVector::cx(std::size_t control, std::size_t target) {
    check_site(control);
    check_site(target);
    if (control == target) {
        throw std::invalid_argument("CX control and target coincide");
    }
    std::size_t cb = std::size_t{1} << control, tb = std::size_t{1} << target;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        if ((b & cb) && !(b & tb)) {
            std::swap(amps_[b], amps_[b | tb]);
        }
    }
}

void StateVector::x(std::size_t q) {
    check_site(q);
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        if (!(b & bit)) {
            std::swap(amps_[b], amps_[b | bit]);
        }
    }
}

void StateVector::z(std::size_t q) {
    check_site(q);
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        if (b & bit) {
            amps_[b] = -amps_[b];
        }
    }
}

void StateVector::apply_zz_phase(std::size_t a, std::size_t b, double theta) {
    check_site(a);
    check_site(b);
    if (a == b) {
        throw std::invalid_argument("two-qubit gate on coincident sites");
    }
    double phi = std::numbers::pi / 4 * theta;
    cplx same = std::polar(1.0, -phi), diff = std::polar(1.0, phi);
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        bool parity = ((k >> a) ^ (k >> b)) & 1;
        amps_[k] *= parity ? diff : same;
    }
}

void StateVector::evolve_zz_layer(std::span<const std::pair<std::size_t, std::size_t>> pairs, double theta) {
    for (auto [a, b] : pairs) {
        apply_zz_phase(a, b, theta);
    }
}

void StateVector::apply_xx_rotation(std::size_t a, std::size_t b, double theta) {
    check_site(a);
    check_site(b);
    if (a == b) {
        throw std::invalid_argument("two-qubit gate on coincident sites");
    }
    apply_pauli_rotation(PauliString::from_sites(n_, {{a, Pauli::X}, {b, Pauli::X}}), std::numbers::pi / 4 * theta);
}

void StateVector::apply_pauli_rotation(const PauliString &p, double phi) {
    check_pauli(p);
    std::vector<cplx> pv(amps_.size());
    apply_pauli_to(p, amps_, pv);
    double c = std::cos(phi), sn = std::sin(phi);
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        amps_[k] = c * amps_[k] - cplx{0.0, sn} * pv[k];
    }
}

void StateVector::apply_pauli_to(const PauliString &p, std::span<const cplx> in, std::span<cplx> out) const {
    check_pauli(p);
    DensePauli d = dense_pauli(p);
    for (std::size_t b = 0; b < in.size(); ++b) {
        cplx v = d.phase * in[b];
        out[b ^ d.xmask] = (std::popcount(b & d.zmask) & 1) ? -v : v;
    }
}

void StateVector::apply_hamiltonian_to(const HamiltonianSpec &h, std::span<const cplx> in, std::span<cplx> out) const {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    for (const auto &[coupling, p] : h.terms) {
        check_pauli(p);
        DensePauli d = dense_pauli(p);
        cplx f = d.phase * coupling;
        for (std::size_t b = 0; b < in.size(); ++b) {
            cplx v = f * in[b];
            out[b ^ d.xmask] += (std::popcount(b & d.zmask) & 1) ? -v : v;
        }
    }
}

void StateVector::evolve_hamiltonian(const HamiltonianSpec &h, double dt) {
    if (dt == 0.0 || h.terms.empty()) {
        return;
    }
    for (const auto &term : h.terms) {
        check_pauli(term.second);
    }
    constexpr double kTol = 1e-8;
    const std::size_t dim = amps_.size();
    const std::size_t m_max = std::min<std::size_t>(40, dim);
    const double total = std::abs(dt);
    const double dir = dt > 0 ? 1.0 : -1.0;

    std::vector<std::vector<cplx>> basis(m_max + 1, std::vector<cplx>(dim));
    std::vector<double> alpha(m_max), beta(m_max);
    double done = 0.0;
    double step = total;
    while (done < total * (1 - 1e-15)) {
        step = std::min(step, total - done);
        // Lanczos on the current state; the result is exp(-i tau T) e1 in the
        // Krylov basis, with error estimate beta_m |y_m|.
        basis[0] = amps_;
        double nrm = norm();
        for (auto &a : basis[0]) {
            a /= nrm;
        }
        std::size_t m = 0;
        bool converged = false;
        Eigen::VectorXcd y;
        while (m < m_max) {
            std::vector<cplx> &w = basis[m + 1];
            apply_hamiltonian_to(h, basis[m], w);
            cplx dot{0.0, 0.0};
            for (std::size_t k = 0; k < dim; ++k) {
                dot += std::conj(basis[m][k]) * w[k];
            }
            alpha[m] = dot.real();
            // Full reorthogonalization keeps the basis orthonormal to roundoff.
            for (std::size_t j = 0; j <= m; ++j) {
                cplx proj{0.0, 0.0};
                for (std::size_t k = 0; k < dim; ++k) {
                    proj += std::conj(basis[j][k]) * w[k];
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    w[k] -= proj * basis[j][k];
                }
            }
            double b = 0.0;
            for (const auto &v : w) {
                b += std::norm(v);
            }
            b = std::sqrt(b);
            beta[m] = b;
            ++m;

            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            for (std::size_t j = 0; j < m; ++j) {
                T(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = alpha[j];
                if (j + 1 < m) {
                    T(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + 1)) = beta[j];
                    T(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = beta[j];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            const auto &Q = es.eigenvectors();
            Eigen::VectorXcd coeff(static_cast<Eigen::Index>(m));
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
                coeff(j) = std::polar(1.0, -dir * step * es.eigenvalues()(j)) * Q(0, j);
            }
            y = Q.cast<cplx>() * coeff;
            bool breakdown = b < 1e-12;
            double err = breakdown ? 0.0 : b * std::abs(y(static_cast<Eigen::Index>(m - 1)));
            if (err <= kTol * step / total) {
                converged = true;
                break;
            }
            if (breakdown) {
                break;
            }
            for (auto &v : w) {
                v /= b;
            }
        }
        if (!converged) {
            step /= 2;
            if (step < total * 1e-10) {
                throw std::runtime_error("Lanczos integrator failed to converge");
            }
            continue;
        }
        std::fill(amps_.begin(), amps_.end(), cplx{0.0, 0.0});
        for (std::size_t j = 0; j < m; ++j) {
            cplx c = y(static_cast<Eigen::Index>(j)) * nrm;
            for (std::size_t k = 0; k < dim; ++k) {
                amps_[k] += c * basis[j][k];
            }
        }
        done += step;
    }
    normalize();
}

MeasureOutcome StateVector::measure_pauli(const PauliString &p, double u) {
    check_pauli(p);
    if (p.is_identity()) {
        throw std::invalid_argument("the identity string is not a valid observable here");
    }
    std::vector<cplx> pv(amps_.size());
    apply_pauli_to(p, amps_, pv);
    double ev = 0.0;
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        ev += (std::conj(amps_[k]) * pv[k]).real();
    }
    double p_plus = std::clamp(0.5 * (1.0 + ev), 0.0, 1.0);
    if (p_plus < kSnap) {
        p_plus = 0.0;
    } else if (p_plus > 1.0 - kSnap) {
        p_plus = 1.0;
    }
    int value = u < p_plus ? +1 : -1;
    double prob = value > 0 ? p_plus : 1.0 - p_plus;
    if (prob < kSnap) {
        throw std::runtime_error("measurement branch has vanishing norm");
    }
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        amps_[k] = 0.5 * (amps_[k] + static_cast<double>(value) * pv[k]);
    }
    normalize();
    return {value, p_plus == 0.0 || p_plus == 1.0};
}

MeasureOutcome StateVector::measure_x(std::size_t q, double u) {
    check_site(q);
    return measure_pauli(PauliString::from_sites(n_, {{q, Pauli::X}}), u);
}

double StateVector::expectation(const PauliString &p) const {
    check_pauli(p);
    std::vector<cplx> pv(amps_.size());
    apply_pauli_to(p, amps_, pv);
    double ev = 0.0;
    for (std::size_t k = 0; k < amps_.size(); ++k) {
        ev += (std::conj(amps_[k]) * pv[k]).real();
    }
    return ev;
}

double StateVector::entropy(std::span<const std::size_t> region) const {
    std::uint64_t mask = mask_of(region, n_);
    std::size_t k = region.size();
    if (k == 0 || k == n_) {
        return 0.0;
    }
    // The spectrum of rho_A equals that of rho_B for pure states.
    std::uint64_t full = (std::uint64_t{1} << n_) - 1;
    if (2 * k > n_) {
        mask = full & ~mask;
        k = n_ - k;
    }
    std::uint64_t rest = full & ~mask;
    Eigen::Index rows = Eigen::Index{1} << k;
    Eigen::Index cols = Eigen::Index{1} << (n_ - k);
    Eigen::MatrixXcd M(rows, cols);
    for (std::size_t b = 0; b < amps_.size(); ++b) {
        std::uint64_t ra = 0, rb = 0;
        unsigned ia = 0, ib = 0;
        for (std::size_t q = 0; q < n_; ++q) {
            std::uint64_t bit = std::uint64_t{1} << q;
            std::uint64_t v = (b >> q) & 1;
            if (mask & bit) {
                ra |= v << ia++;
            } else if (rest & bit) {
                rb |= v << ib++;
            }
        }
        M(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(rb)) = amps_[b];
    }
    Eigen::MatrixXcd rho = M * M.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
        double lam = es.eigenvalues()(j);
        if (lam > 1e-15) {
            s -= lam * std::log(lam);
        }
    }
    return s;
}

double StateVector::mutual_information_2(std::span<const std::size_t> a, std::span<const std::size_t> b) const {
    std::uint64_t ma = mask_of(a, n_), mb = mask_of(b, n_);
    if (ma & mb) {
        throw std::invalid_argument("regions overlap");
    }
    std::vector<std::size_t> ab(a.begin(), a.end());
    ab.insert(ab.end(), b.begin(), b.end());
    return entropy(a) + entropy(b) - entropy(ab);
}

double StateVector::mutual_information_3(std::span<const std::size_t> a,
                                         std::span<const std::size_t> b,
                                         std::span<const std::size_t> c) const {
    std::uint64_t ma = mask_of(a, n_), mb = mask_of(b, n_), mc = mask_of(c, n_);
    if ((ma & mb) || (mb & mc) || (ma & mc)) {
        throw std::invalid_argument("regions overlap");
    }
    auto join = [](std::initializer_list<std::span<const std::size_t>> rs) {
        std::vector<std::size_t> out;
        for (auto r : rs) {
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    };
    return entropy(a) + entropy(b) + entropy(c) - entropy(join({a, b})) - entropy(join({b, c})) -
           entropy(join({a, c})) + entropy(join({a, b, c}));
}

}  // namespace stochlre
