#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "liewn/sun.hpp"
#include "liewn/weinorman.hpp"

namespace liewn::prop {

using cplx = std::complex<double>;
using xcplx = std::complex<long double>;
using CMat = Eigen::MatrixXcd;

// ---------------------------------------------------------------- tapes

/// Flat evaluation program for one expression over complex slots.
class Tape {
public:
    enum class Op : std::uint8_t { Const, Load, Add, Mul, Div, Exp, Pow };
    struct Instr {
        Op op;
        std::uint32_t a = 0, b = 0;  // operand registers, slot (Load) or exponent (Pow)
        cplx value{};                // Const
    };

    [[nodiscard]] cplx eval(std::span<const cplx> slots) const;
    [[nodiscard]] std::size_t size() const noexcept { return code_.size(); }

    friend class TapeBuilder;

private:
    std::vector<Instr> code_;
};

/// Maps symbols to slot indices.
using SlotMap = std::map<sym::Symbol, std::uint32_t>;

/// Throws UnboundSymbol for a symbol absent from `slots`.
Tape compile(const sym::Expr& e, const SlotMap& slots);

// ---------------------------------------------------------------- eta bindings

struct Constant {
    cplx value;
};
/// sum_k c_k t^k
struct Polynomial {
    std::vector<cplx> coefficients;
};
/// amplitude * sin(omega t + phase) + offset
struct Sinusoid {
    cplx amplitude;
    double omega = 1;
    double phase = 0;
    cplx offset;
};
/// Modified Akima cubic interpolation of samples; constant extrapolation.
struct Tabulated {
    std::vector<double> t;
    std::vector<cplx> values;
};
using TimeFunction = std::variant<Constant, Polynomial, Sinusoid, Tabulated>;

class EtaBinding {
public:
    EtaBinding() = default;
    explicit EtaBinding(std::vector<TimeFunction> fns);
    static EtaBinding constant(const std::vector<cplx>& values);
    /// Accepts "const:c1,c2,...", inline JSON, or the path of a JSON file (see README).
    static EtaBinding parse(const std::string& spec_or_json);
    static EtaBinding from_json(const nlohmann::json& doc);

    [[nodiscard]] std::size_t size() const noexcept { return fns_.size(); }
    [[nodiscard]] cplx operator()(std::size_t l, double t) const;  // 0-based index
    void eval(double t, std::span<cplx> out) const;
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] const std::vector<TimeFunction>& functions() const noexcept { return fns_; }

private:
    std::vector<TimeFunction> fns_;
    std::vector<std::function<double(double)>> re_, im_;  // tabulated interpolants
};

// ---------------------------------------------------------------- trajectories

struct Event {
    double t = 0;
    enum class Kind { SingularityWarning, StepFailure } kind = Kind::SingularityWarning;
    std::string detail;
};

struct Trajectory {
    std::vector<double> grid;
    std::vector<std::vector<cplx>> states;
    std::vector<cplx> det;
    std::vector<Event> events;

    [[nodiscard]] const std::vector<cplx>& final_state() const { return states.back(); }
    [[nodiscard]] nlohmann::json to_json() const;
};

struct IntegrationError : Error {
    IntegrationError(const std::string& msg, Trajectory partial) : Error(msg), partial(std::move(partial)) {}
    Trajectory partial;
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t samples = 201;  // grid points including both ends
    double singular_threshold = 1e-8;
    std::map<std::string, cplx> parameters;  // values of algebra parameters
};

/// Compiled right-hand side num/den for each unknown, and det xi.
class CompiledSystem {
public:
    CompiledSystem(const wn::ODESystem& sys, const std::map<std::string, cplx>& parameters);

    [[nodiscard]] std::size_t order() const noexcept { return num_.size(); }
    [[nodiscard]] wn::ODEKind kind() const noexcept { return kind_; }
    /// d state / dt for TimeEvolution (i.e. -i rhs) or d state / dtheta for Factorization.
    void derivative(std::span<const cplx> state, std::span<const cplx> inputs, std::span<cplx> out) const;
    [[nodiscard]] cplx det(std::span<const cplx> state) const;

private:
    wn::ODEKind kind_;
    std::vector<Tape> num_, den_;
    Tape det_;
    std::vector<cplx> params_;
};

/// Adaptive Dormand-Prince 5(4) from the zero state. Throws IntegrationError
/// (with the partial trajectory) on step-size underflow or a non-finite state.
Trajectory integrate(const wn::ODESystem& sys, const EtaBinding& eta, double t0, double t1,
                     const IntegrateOptions& opts = {});
Trajectory integrate(const CompiledSystem& sys, const EtaBinding& eta, double t0, double t1,
                     const IntegrateOptions& opts = {});

/// max over interior grid points of |i xi^T(L) dL/dt - eta(t)|_inf, with dL/dt
/// from fourth-order centered differences on the (uniform) grid. For
/// Factorization trajectories the factor i is dropped.
double residual_check(const lie::Algebra& a, const Trajectory& traj, const EtaBinding& eta,
                      const std::map<std::string, cplx>& parameters = {},
                      wn::ODEKind kind = wn::ODEKind::TimeEvolution);

// ---------------------------------------------------------------- matrix oracles

std::vector<CMat> numeric_generators(const sun::GeneratorSet& g);
std::vector<CMat> numeric_generators(const lie::Algebra& a);

/// U(t1) from i dU/dt = H(t) U, U(t0) = 1, H = sum_l eta_l(t) g_l.
CMat matrix_oracle(const std::vector<CMat>& g, const EtaBinding& eta, double t0, double t1, double rtol = 1e-10,
                   double atol = 1e-12);

/// exp(-i t sum_l eta_l g_l).
CMat direct_exponential(const std::vector<CMat>& g, const std::vector<cplx>& eta, double t);

/// prod_l exp(L_l g_l); nilpotent (g^2 = 0) and diagonal factors are formed exactly.
/// The product is accumulated in extended precision, since factorizations near a
/// singular point multiply factors of size e^{|L|} whose contributions cancel.
CMat assemble_teo_numeric(const std::vector<CMat>& g, const std::vector<cplx>& lambdas);
CMat assemble_teo_numeric(const std::vector<CMat>& g, const std::vector<xcplx>& lambdas);

/// su(4) CWB coefficients realizing e^{i phi_n} CNOT as Re L9 grows, with
/// phi_n = (2n+1) pi/4 and L13, L14 free.
std::vector<xcplx> cnot_coefficients(long double re_l9, int n, xcplx l13, xcplx l14);

/// Explicit qubit TEO (sun::qubit_generators) times e^{i Im L2 / 2}, the phase
/// that is dropped in the printed single-qubit gate values.
CMat qubit_gate_form(const std::vector<cplx>& lambdas);

/// |i dU/dt - H U|_F at one point of a TimeEvolution flow, with U the numeric
/// product for `lambdas` and dU/dt a centered difference along dL/dt.
double schrodinger_defect(const std::vector<CMat>& g, const CompiledSystem& sys, const std::vector<cplx>& lambdas,
                          const std::vector<cplx>& eta);

struct GateCheck {
    bool pass = false;
    cplx phase;
    double residual = 0;
};

/// Compares U with phase * target. The unit phase comes from tr(target^dagger U),
/// or from the largest-entry ratio when that trace vanishes.
GateCheck verify_gate(const CMat& U, const CMat& target, double tol);

/// hadamard, t, x, y, z, cnot.
CMat gate(const std::string& name);

/// Numeric literal such as "1-2i", "ln2-i*pi", "sqrt(2)/2", "exp(i*pi/4)".
/// Supports + - * / ^, i, pi, e and ln, log, exp, sqrt, sin, cos, tan.
cplx parse_complex(std::string_view text);
/// Comma-separated list of parse_complex literals.
std::vector<cplx> parse_complex_list(std::string_view text);

}  // namespace liewn::prop
