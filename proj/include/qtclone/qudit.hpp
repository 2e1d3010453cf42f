// Copyright 2026 The qtclone developers
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

// Dense complex linear algebra over registers of d-level subsystems:
// state construction, tensor composition, projection, partial trace, and
// information measures.
//
// Index convention used everywhere in this library: mixed-radix big-endian,
// i.e. the leftmost subsystem is the most significant digit. For a register
// (A1, A2, B, C) of equal dimension d the composite basis index is
// ((a1*d + a2)*d + b)*d + c.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtclone {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Numerical tolerances shared across the library. `norm` guards state and
/// unitarity checks, `cross` analytic-vs-simulated cross-checks, `opt`
/// optimizer convergence. All must be strictly positive.
struct Tolerances {
    double norm = 1e-10;
    double cross = 1e-9;
    double opt = 1e-9;

    Tolerances() = default;
    Tolerances(double norm_tol, double cross_tol, double opt_tol)
        : norm(norm_tol), cross(cross_tol), opt(opt_tol) {
        if (!(norm > 0.0) || !(cross > 0.0) || !(opt > 0.0))
            throw std::invalid_argument("Tolerances must be strictly positive");
    }
};

/// Dimension of a single d-level subsystem. d = 0, 1 are rejected.
class QuditDim {
  public:
    explicit QuditDim(std::size_t d) : d_(d) {
        if (d < 2)
            throw std::invalid_argument("qudit dimension must be >= 2, got " +
                                        std::to_string(d));
    }
    std::size_t value() const { return d_; }
    bool operator==(const QuditDim&) const = default;

  private:
    std::size_t d_;
};

/// An ordered list of subsystem dimensions plus mixed-radix index helpers.
class Register {
  public:
    explicit Register(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty())
            throw std::invalid_argument("register needs at least one subsystem");
        total_dim_ = 1;
        for (std::size_t d : dims_) {
            if (d < 2)
                throw std::invalid_argument("subsystem dimension must be >= 2");
            total_dim_ *= d;
        }
    }

    /// `count` subsystems, each of dimension d.
    static Register uniform(QuditDim d, std::size_t count) {
        return Register(std::vector<std::size_t>(count, d.value()));
    }

    std::size_t size() const { return dims_.size(); }
    std::size_t dim(std::size_t pos) const { return dims_.at(pos); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t total_dim() const { return total_dim_; }

    /// Composite index of a digit tuple (leftmost digit most significant).
    std::size_t index_of(const std::vector<std::size_t>& digits) const {
        if (digits.size() != dims_.size())
            throw std::invalid_argument("digit count does not match register");
        std::size_t idx = 0;
        for (std::size_t p = 0; p < dims_.size(); ++p) {
            if (digits[p] >= dims_[p])
                throw std::out_of_range("digit out of range for subsystem");
            idx = idx * dims_[p] + digits[p];
        }
        return idx;
    }

    std::vector<std::size_t> digits_of(std::size_t index) const {
        if (index >= total_dim_)
            throw std::out_of_range("index out of range for register");
        std::vector<std::size_t> digits(dims_.size());
        for (std::size_t p = dims_.size(); p-- > 0;) {
            digits[p] = index % dims_[p];
            index /= dims_[p];
        }
        return digits;
    }

    bool operator==(const Register&) const = default;

  private:
    std::vector<std::size_t> dims_;
    std::size_t total_dim_;
};

/// Complex amplitude vector over a labeled multi-qudit register.
class StateVector {
  public:
    StateVector(Register reg, Vector amplitudes)
        : reg_(std::move(reg)), amps_(std::move(amplitudes)) {
        if (static_cast<std::size_t>(amps_.size()) != reg_.total_dim())
            throw std::invalid_argument("amplitude count does not match register");
    }

    static StateVector basis(Register reg, std::size_t index) {
        if (index >= reg.total_dim())
            throw std::out_of_range("basis index out of range");
        Vector v = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return StateVector(std::move(reg), std::move(v));
    }

    const Register& reg() const { return reg_; }
    const Vector& amplitudes() const { return amps_; }
    Complex amplitude(std::size_t i) const {
        return amps_(static_cast<Eigen::Index>(i));
    }
    std::size_t dim() const { return reg_.total_dim(); }

    double norm() const { return amps_.norm(); }
    bool is_normalized(double tol = Tolerances{}.norm) const {
        return std::abs(squared_norm() - 1.0) <= tol;
    }
    double squared_norm() const { return amps_.squaredNorm(); }

    StateVector normalized() const {
        const double n = norm();
        if (n == 0.0)
            throw std::invalid_argument("cannot normalize the zero vector");
        return StateVector(reg_, amps_ / n);
    }

  private:
    Register reg_;
    Vector amps_;
};

/// Complex Hermitian matrix over a register, used for reduced states.
class DensityMatrix {
  public:
    DensityMatrix(Register reg, Matrix entries)
        : reg_(std::move(reg)), entries_(std::move(entries)) {
        const auto n = static_cast<Eigen::Index>(reg_.total_dim());
        if (entries_.rows() != n || entries_.cols() != n)
            throw std::invalid_argument("matrix shape does not match register");
    }

    const Register& reg() const { return reg_; }
    const Matrix& entries() const { return entries_; }
    std::size_t dim() const { return reg_.total_dim(); }
    Complex trace() const { return entries_.trace(); }

  private:
    Register reg_;
    Matrix entries_;
};

namespace detail {

inline void require_normalized(const StateVector& psi, const char* who,
                               double tol) {
    if (!psi.is_normalized(tol))
        throw std::invalid_argument(std::string(who) +
                                    ": input state is not normalized");
}

// Validates a keep set and returns it sorted. Kept subsystems stay in
// ascending register order.
inline std::vector<std::size_t> checked_keep(const Register& reg,
                                             std::vector<std::size_t> keep) {
    if (keep.empty())
        throw std::invalid_argument("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw std::invalid_argument("partial_trace: duplicate subsystem index");
    if (keep.back() >= reg.size())
        throw std::out_of_range("partial_trace: subsystem index out of range");
    return keep;
}

// For every composite index of `reg`, the (kept, traced) sub-index pair
// induced by the keep set, as flat arrays kept_of[i], traced_of[i].
struct SplitIndex {
    std::vector<std::size_t> kept_of;
    std::vector<std::size_t> traced_of;
    std::size_t kept_dim = 1;
    std::size_t traced_dim = 1;
};

inline SplitIndex split_indices(const Register& reg,
                                const std::vector<std::size_t>& keep_sorted) {
    SplitIndex s;
    std::vector<bool> is_kept(reg.size(), false);
    for (std::size_t p : keep_sorted) is_kept[p] = true;
    for (std::size_t p = 0; p < reg.size(); ++p)
        (is_kept[p] ? s.kept_dim : s.traced_dim) *= reg.dim(p);

    const std::size_t total = reg.total_dim();
    s.kept_of.resize(total);
    s.traced_of.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx, kept = 0, traced = 0;
        // walk digits most-significant first
        std::vector<std::size_t> digits(reg.size());
        for (std::size_t p = reg.size(); p-- > 0;) {
            digits[p] = rest % reg.dim(p);
            rest /= reg.dim(p);
        }
        for (std::size_t p = 0; p < reg.size(); ++p) {
            if (is_kept[p])
                kept = kept * reg.dim(p) + digits[p];
            else
                traced = traced * reg.dim(p) + digits[p];
        }
        s.kept_of[idx] = kept;
        s.traced_of[idx] = traced;
    }
    return s;
}

inline Register kept_register(const Register& reg,
                              const std::vector<std::size_t>& keep_sorted) {
    std::vector<std::size_t> dims;
    dims.reserve(keep_sorted.size());
    for (std::size_t p : keep_sorted) dims.push_back(reg.dim(p));
    return Register(std::move(dims));
}

}  // namespace detail

/// <a|b>. Registers must coincide.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.reg() != b.reg())
        throw std::invalid_argument("inner_product: register mismatch");
    return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the left
}

/// |a> (x) |b>. The result register is a's subsystems followed by b's.
inline StateVector tensor_product(const StateVector& a, const StateVector& b,
                                  const Tolerances& tol = {}) {
    detail::require_normalized(a, "tensor_product", tol.norm);
    detail::require_normalized(b, "tensor_product", tol.norm);
    std::vector<std::size_t> dims = a.reg().dims();
    dims.insert(dims.end(), b.reg().dims().begin(), b.reg().dims().end());
    const std::size_t nb = b.dim();
    Vector out(static_cast<Eigen::Index>(a.dim() * nb));
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < nb; ++j)
            out(static_cast<Eigen::Index>(i * nb + j)) =
                a.amplitude(i) * b.amplitude(j);
    return StateVector(Register(std::move(dims)), std::move(out));
}

/// |psi><psi| as a DensityMatrix on the same register.
inline DensityMatrix to_density(const StateVector& psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(psi.reg(), std::move(m));
}

/// Reduced density matrix of a pure state on the kept subsystems.
/// `keep` must be a nonempty subset of register positions (full set allowed);
/// kept subsystems appear in ascending register order.
inline DensityMatrix partial_trace(const StateVector& psi,
                                   std::vector<std::size_t> keep) {
    const auto keep_sorted = detail::checked_keep(psi.reg(), std::move(keep));
    const auto split = detail::split_indices(psi.reg(), keep_sorted);
    // Gather psi into a kept x traced matrix M; the reduction is M M^dagger.
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(split.kept_dim),
                            static_cast<Eigen::Index>(split.traced_dim));
    for (std::size_t idx = 0; idx < psi.dim(); ++idx)
        m(static_cast<Eigen::Index>(split.kept_of[idx]),
          static_cast<Eigen::Index>(split.traced_of[idx])) = psi.amplitude(idx);
    Matrix rho = m * m.adjoint();
    return DensityMatrix(detail::kept_register(psi.reg(), keep_sorted),
                         std::move(rho));
}

/// Reduced density matrix of a mixed state on the kept subsystems.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   std::vector<std::size_t> keep) {
    const auto keep_sorted = detail::checked_keep(rho.reg(), std::move(keep));
    const auto split = detail::split_indices(rho.reg(), keep_sorted);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(split.kept_dim),
                              static_cast<Eigen::Index>(split.kept_dim));
    // Group composite indices by traced sub-index, then accumulate the
    // corresponding block outer products.
    std::vector<std::vector<std::size_t>> by_traced(split.traced_dim);
    for (std::size_t idx = 0; idx < rho.dim(); ++idx)
        by_traced[split.traced_of[idx]].push_back(idx);
    for (const auto& group : by_traced)
        for (std::size_t r : group)
            for (std::size_t c : group)
                out(static_cast<Eigen::Index>(split.kept_of[r]),
                    static_cast<Eigen::Index>(split.kept_of[c])) +=
                    rho.entries()(static_cast<Eigen::Index>(r),
                                  static_cast<Eigen::Index>(c));
    return DensityMatrix(detail::kept_register(rho.reg(), keep_sorted),
                         std::move(out));
}

/// <psi|rho|psi>, clamped to [0, 1]. psi must be normalized and live on the
/// same register as rho.
inline double fidelity(const StateVector& psi, const DensityMatrix& rho,
                       const Tolerances& tol = {}) {
    if (psi.reg() != rho.reg())
        throw std::invalid_argument("fidelity: register mismatch");
    detail::require_normalized(psi, "fidelity", tol.norm);
    const Complex val =
        psi.amplitudes().dot(rho.entries() * psi.amplitudes());
    return std::clamp(val.real(), 0.0, 1.0);
}

/// -sum_i lambda_i log2 lambda_i over the eigenvalues of rho, in bits.
/// Eigenvalues in [-tol.norm, 0) are clamped to zero; a non-Hermitian input
/// or an eigenvalue below -tol.norm is rejected.
inline double von_neumann_entropy(const DensityMatrix& rho,
                                  const Tolerances& tol = {}) {
    const Matrix& m = rho.entries();
    const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > tol.norm)
        throw std::invalid_argument(
            "von_neumann_entropy: matrix is not Hermitian (deviation " +
            std::to_string(herm_dev) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("von_neumann_entropy: eigensolver failed");
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double lambda = solver.eigenvalues()(i);
        if (lambda < -tol.norm)
            throw std::invalid_argument(
                "von_neumann_entropy: eigenvalue " + std::to_string(lambda) +
                " below tolerance; not a density matrix");
        if (lambda <= 0.0) continue;  // 0 log 0 == 0
        entropy -= lambda * std::log2(lambda);
    }
    return std::max(entropy, 0.0);
}

/// True iff a and b coincide up to a global phase: |<a|b>| >= 1 - tau.
inline bool global_phase_equal(const StateVector& a, const StateVector& b,
                               double tau) {
    if (a.reg() != b.reg())
        throw std::invalid_argument("global_phase_equal: register mismatch");
    return std::abs(inner_product(a, b)) >= 1.0 - tau;
}

/// Applies a d x d matrix to one subsystem of a state, leaving the rest alone.
inline StateVector apply_local_unitary(const StateVector& psi, const Matrix& u,
                                       std::size_t target) {
    const Register& reg = psi.reg();
    if (target >= reg.size())
        throw std::out_of_range("apply_local_unitary: target out of range");
    const std::size_t dt = reg.dim(target);
    if (u.rows() != static_cast<Eigen::Index>(dt) ||
        u.cols() != static_cast<Eigen::Index>(dt))
        throw std::invalid_argument(
            "apply_local_unitary: matrix does not match subsystem dimension");

    std::size_t inner = 1;  // stride of the target digit
    for (std::size_t p = target + 1; p < reg.size(); ++p) inner *= reg.dim(p);
    const std::size_t block = inner * dt;

    Vector out = Vector::Zero(static_cast<Eigen::Index>(psi.dim()));
    for (std::size_t base = 0; base < psi.dim(); base += block) {
        for (std::size_t off = 0; off < inner; ++off) {
            for (std::size_t i = 0; i < dt; ++i) {
                Complex acc = 0.0;
                for (std::size_t m = 0; m < dt; ++m)
                    acc += u(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(m)) *
                           psi.amplitude(base + m * inner + off);
                out(static_cast<Eigen::Index>(base + i * inner + off)) = acc;
            }
        }
    }
    return StateVector(reg, std::move(out));
}

/// Hermitian within tol, unit trace within tol, eigenvalues >= -tol.
inline bool is_valid_density(const DensityMatrix& rho,
                             const Tolerances& tol = {}) {
    const Matrix& m = rho.entries();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol.norm) return false;
    if (std::abs(m.trace() - Complex(1.0)) > tol.norm) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return false;
    return solver.eigenvalues().minCoeff() >= -tol.norm;
}

}  // namespace qtclone
