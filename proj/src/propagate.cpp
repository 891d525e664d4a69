#include "liewn/propagate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/interpolators/makima.hpp>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "liewn/algebra_io.hpp"

namespace liewn::prop {

namespace odeint = boost::numeric::odeint;
using nlohmann::json;
using State = std::vector<cplx>;

namespace {

constexpr cplx I{0, 1};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool all_finite(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(), [](cplx z) { return finite(z); });
}

}  // namespace

// ---------------------------------------------------------------- tapes

cplx Tape::eval(std::span<const cplx> slots) const {
    thread_local std::vector<cplx> r;
    r.resize(code_.size());
    for (std::size_t k = 0; k < code_.size(); ++k) {
        const Instr& in = code_[k];
        switch (in.op) {
            case Op::Const: r[k] = in.value; break;
            case Op::Load: r[k] = slots[in.a]; break;
            case Op::Add: r[k] = r[in.a] + r[in.b]; break;
            case Op::Mul: r[k] = r[in.a] * r[in.b]; break;
            case Op::Div: r[k] = r[in.a] / r[in.b]; break;
            case Op::Exp: r[k] = std::exp(r[in.a]); break;
            case Op::Pow: {
                cplx base = r[in.a], acc = 1;
                for (std::uint32_t n = in.b; n != 0; n >>= 1) {
                    if (n & 1U) acc *= base;
                    base *= base;
                }
                r[k] = acc;
                break;
            }
        }
    }
    return code_.empty() ? cplx{} : r.back();
}

class TapeBuilder {
public:
    explicit TapeBuilder(const SlotMap& slots) : slots_(slots) {}

    std::uint32_t constant(cplx v) {
        auto key = std::make_pair(v.real(), v.imag());
        if (auto it = consts_.find(key); it != consts_.end()) return it->second;
        return consts_[key] = push({Tape::Op::Const, 0, 0, v});
    }

    std::uint32_t op(Tape::Op o, std::uint32_t a, std::uint32_t b = 0) {
        if ((o == Tape::Op::Add || o == Tape::Op::Mul) && a > b) std::swap(a, b);
        auto key = std::make_tuple(o, a, b);
        if (auto it = ops_.find(key); it != ops_.end()) return it->second;
        return ops_[key] = push({o, a, b, {}});
    }

    std::uint32_t monomial(const sym::Monomial& m, std::optional<std::uint32_t> acc) {
        for (const auto& [s, p] : m) {
            auto it = slots_.find(s);
            if (it == slots_.end()) throw UnboundSymbol(s.text());
            std::uint32_t x = op(Tape::Op::Load, it->second);
            if (p != 1) x = op(Tape::Op::Pow, x, p);
            acc = acc ? op(Tape::Op::Mul, *acc, x) : x;
        }
        return acc ? *acc : constant(1);
    }

    std::uint32_t term(const sym::Coefficient& c, const sym::Monomial& m) {
        std::optional<std::uint32_t> acc;
        if (!c.is_one()) acc = constant(c.to_complex());
        return monomial(m, acc);
    }

    std::uint32_t expr(const sym::Expr& e) {
        if (e.is_zero()) return constant(0);
        std::optional<std::uint32_t> sum;
        for (const sym::Term& t : e.terms()) {
            std::uint32_t x = term(t.coeff, t.mono);
            if (!t.exp.empty()) {
                std::optional<std::uint32_t> arg;
                for (const sym::PolyTerm& pt : t.exp) {
                    std::uint32_t y = term(pt.coeff, pt.mono);
                    arg = arg ? op(Tape::Op::Add, *arg, y) : y;
                }
                std::uint32_t ex = op(Tape::Op::Exp, *arg);
                x = t.coeff.is_one() && t.mono.empty() ? ex : op(Tape::Op::Mul, x, ex);
            }
            sum = sum ? op(Tape::Op::Add, *sum, x) : x;
        }
        return *sum;
    }

    Tape finish(std::uint32_t result) {
        // the result must be the last register
        if (result + 1 != tape_.code_.size()) {
            tape_.code_.push_back({Tape::Op::Add, result, constant(0), {}});
        }
        return std::move(tape_);
    }

private:
    std::uint32_t push(Tape::Instr in) {
        tape_.code_.push_back(in);
        return static_cast<std::uint32_t>(tape_.code_.size() - 1);
    }

    const SlotMap& slots_;
    Tape tape_;
    std::map<std::pair<double, double>, std::uint32_t> consts_;
    std::map<std::tuple<Tape::Op, std::uint32_t, std::uint32_t>, std::uint32_t> ops_;
};

Tape compile(const sym::Expr& e, const SlotMap& slots) {
    TapeBuilder b(slots);
    std::uint32_t r = b.expr(e);
    return b.finish(r);
}

namespace {

/// Unknowns at 0..L-1, inputs at L..2L-1, parameters after.
struct Layout {
    SlotMap slots;
    std::vector<cplx> params;
};

Layout make_layout(std::size_t L, sym::SymbolKind unknown, sym::SymbolKind input, const std::set<sym::Symbol>& used,
                   const std::map<std::string, cplx>& parameters) {
    Layout out;
    for (std::size_t n = 1; n <= L; ++n) {
        out.slots[{unknown, static_cast<std::uint32_t>(n)}] = static_cast<std::uint32_t>(n - 1);
        out.slots[{input, static_cast<std::uint32_t>(n)}] = static_cast<std::uint32_t>(L + n - 1);
    }
    for (const sym::Symbol& s : used) {
        if (!s.is_parameter()) continue;
        auto it = parameters.find(s.name());
        if (it == parameters.end()) throw UnboundSymbol(s.name());
        out.slots[s] = static_cast<std::uint32_t>(2 * L + out.params.size());
        out.params.push_back(it->second);
    }
    return out;
}

void collect(std::set<sym::Symbol>& into, const sym::Expr& e) {
    auto s = e.free_symbols();
    into.insert(s.begin(), s.end());
}

}  // namespace

// ---------------------------------------------------------------- compiled systems

CompiledSystem::CompiledSystem(const wn::ODESystem& sys, const std::map<std::string, cplx>& parameters)
    : kind_(sys.kind) {
    std::set<sym::Symbol> used;
    for (const auto& r : sys.rhs) {
        collect(used, r.num());
        collect(used, r.den());
    }
    collect(used, sys.coupling.det);
    Layout lay = make_layout(sys.order(), sys.coefficient_kind, sys.input_kind, used, parameters);
    params_ = std::move(lay.params);
    for (const auto& r : sys.rhs) {
        num_.push_back(compile(r.num(), lay.slots));
        den_.push_back(compile(r.den(), lay.slots));
    }
    det_ = compile(sys.coupling.det, lay.slots);
}

namespace {

std::span<const cplx> fill_slots(std::size_t L, std::span<const cplx> state, std::span<const cplx> inputs,
                                 const std::vector<cplx>& params) {
    thread_local std::vector<cplx> slots;
    slots.assign(2 * L + params.size(), cplx{});
    std::copy(state.begin(), state.end(), slots.begin());
    std::copy(inputs.begin(), inputs.end(), slots.begin() + static_cast<std::ptrdiff_t>(L));
    std::copy(params.begin(), params.end(), slots.begin() + static_cast<std::ptrdiff_t>(2 * L));
    return slots;
}

}  // namespace

void CompiledSystem::derivative(std::span<const cplx> state, std::span<const cplx> inputs,
                                std::span<cplx> out) const {
    auto slots = fill_slots(order(), state, inputs, params_);
    const cplx scale = kind_ == wn::ODEKind::TimeEvolution ? -I : cplx{1};
    for (std::size_t n = 0; n < num_.size(); ++n) {
        out[n] = scale * num_[n].eval(slots) / den_[n].eval(slots);
    }
}

cplx CompiledSystem::det(std::span<const cplx> state) const {
    return det_.eval(fill_slots(order(), state, {}, params_));
}

// ---------------------------------------------------------------- numeric literals

namespace {

class LiteralParser {
public:
    explicit LiteralParser(std::string_view s) : s_(s) {}

    cplx parse() {
        cplx v = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    cplx sum() {
        cplx v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }

    cplx product() {
        cplx v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }

    cplx unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    cplx power() {
        cplx base = postfix();
        if (eat('^')) {
            cplx e = unary();
            if (e.imag() == 0 && e.real() == std::round(e.real()) && std::abs(e.real()) < 64) {
                return std::pow(base, static_cast<int>(e.real()));
            }
            return std::pow(base, e);
        }
        return base;
    }

    // implicit multiplication by a trailing i, as in "2i"
    cplx postfix() {
        cplx v = primary();
        skip();
        if (pos_ < s_.size() && s_[pos_] == 'i' && (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            v *= I;
        }
        return v;
    }

    cplx primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            cplx v = sum();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            if (id == "i" || id == "j") return I;
            if (id == "pi") return std::numbers::pi;
            if (id == "e") return std::numbers::e;
            cplx arg = eat('(') ? paren_rest() : primary();
            if (id == "ln" || id == "log") return std::log(arg);
            if (id == "exp") return std::exp(arg);
            if (id == "sqrt") return std::sqrt(arg);
            if (id == "sin") return std::sin(arg);
            if (id == "cos") return std::cos(arg);
            if (id == "tan") return std::tan(arg);
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected character");
    }

    cplx paren_rest() {
        cplx v = sum();
        if (!eat(')')) fail("expected ')'");
        return v;
    }

    cplx number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string text(s_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

cplx parse_complex(std::string_view text) { return LiteralParser(text).parse(); }

std::vector<cplx> parse_complex_list(std::string_view text) {
    std::vector<cplx> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= text.size(); ++k) {
        if (k < text.size() && text[k] == '(') ++depth;
        if (k < text.size() && text[k] == ')') --depth;
        if (k == text.size() || (text[k] == ',' && depth == 0)) {
            try {
                out.push_back(parse_complex(text.substr(start, k - start)));
            } catch (const ParseError& e) {
                throw ParseError("item " + std::to_string(out.size() + 1) + ": " + e.what(), start + e.offset);
            }
            start = k + 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------- eta bindings

EtaBinding::EtaBinding(std::vector<TimeFunction> fns) : fns_(std::move(fns)) {
    re_.resize(fns_.size());
    im_.resize(fns_.size());
    for (std::size_t l = 0; l < fns_.size(); ++l) {
        const auto* tab = std::get_if<Tabulated>(&fns_[l]);
        if (tab == nullptr) continue;
        if (tab->t.size() != tab->values.size() || tab->t.empty()) {
            throw Error("tabulated eta" + std::to_string(l + 1) + ": times and values must be non-empty and equal in length");
        }
        if (!std::is_sorted(tab->t.begin(), tab->t.end()) ||
            std::adjacent_find(tab->t.begin(), tab->t.end()) != tab->t.end()) {
            throw Error("tabulated eta" + std::to_string(l + 1) + ": times must be strictly increasing");
        }
        for (int part = 0; part < 2; ++part) {
            std::vector<double> x = tab->t, y;
            for (cplx v : tab->values) y.push_back(part == 0 ? v.real() : v.imag());
            const double lo = x.front(), hi = x.back(), ylo = y.front(), yhi = y.back();
            std::function<double(double)> f;
            if (x.size() >= 4) {
                auto spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(x), std::move(y));
                f = [spline, lo, hi, ylo, yhi](double t) { return t <= lo ? ylo : t >= hi ? yhi : (*spline)(t); };
            } else {
                f = [x, y](double t) {
                    if (t <= x.front()) return y.front();
                    if (t >= x.back()) return y.back();
                    std::size_t k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
                    double w = (t - x[k - 1]) / (x[k] - x[k - 1]);
                    return (1 - w) * y[k - 1] + w * y[k];
                };
            }
            (part == 0 ? re_ : im_)[l] = std::move(f);
        }
    }
}

EtaBinding EtaBinding::constant(const std::vector<cplx>& values) {
    std::vector<TimeFunction> fns;
    for (cplx v : values) fns.emplace_back(Constant{v});
    return EtaBinding(std::move(fns));
}

cplx EtaBinding::operator()(std::size_t l, double t) const {
    const TimeFunction& f = fns_.at(l);
    if (const auto* c = std::get_if<Constant>(&f)) return c->value;
    if (const auto* p = std::get_if<Polynomial>(&f)) {
        cplx acc = 0;
        for (auto it = p->coefficients.rbegin(); it != p->coefficients.rend(); ++it) acc = acc * t + *it;
        return acc;
    }
    if (const auto* s = std::get_if<Sinusoid>(&f)) return s->amplitude * std::sin(s->omega * t + s->phase) + s->offset;
    return {re_[l](t), im_[l](t)};
}

void EtaBinding::eval(double t, std::span<cplx> out) const {
    for (std::size_t l = 0; l < fns_.size(); ++l) out[l] = (*this)(l, t);
}

bool EtaBinding::is_constant() const {
    return std::all_of(fns_.begin(), fns_.end(), [](const TimeFunction& f) { return std::holds_alternative<Constant>(f); });
}

namespace {

cplx json_complex(const json& v, const std::string& at) {
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_string()) {
        try {
            return parse_complex(v.get<std::string>());
        } catch (const ParseError& e) {
            throw io::SchemaError(at, e.what());
        }
    }
    throw io::SchemaError(at, "expected a number, [re, im] or a numeric string");
}

double json_real(const json& obj, const char* key, double fallback, const std::string& at) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw io::SchemaError(at + "/" + key, "expected a number");
    return obj[key].get<double>();
}

const json& member(const json& obj, const char* key, const std::string& at) {
    if (!obj.contains(key)) throw io::SchemaError(at + "/" + key, "missing required member");
    return obj[key];
}

std::vector<cplx> complex_array(const json& v, const std::string& at) {
    if (!v.is_array()) throw io::SchemaError(at, "expected an array");
    std::vector<cplx> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(json_complex(v[k], at + "/" + std::to_string(k)));
    return out;
}

TimeFunction time_function(const json& v, const std::string& at) {
    if (!v.is_object()) return Constant{json_complex(v, at)};
    const json& type = member(v, "type", at);
    if (!type.is_string()) throw io::SchemaError(at + "/type", "expected a string");
    const std::string name = type.get<std::string>();
    if (name == "constant") return Constant{json_complex(member(v, "value", at), at + "/value")};
    if (name == "polynomial") return Polynomial{complex_array(member(v, "coefficients", at), at + "/coefficients")};
    if (name == "sinusoid") {
        Sinusoid s;
        s.amplitude = json_complex(member(v, "amplitude", at), at + "/amplitude");
        s.omega = json_real(v, "omega", 1.0, at);
        s.phase = json_real(v, "phase", 0.0, at);
        if (v.contains("offset")) s.offset = json_complex(v["offset"], at + "/offset");
        return s;
    }
    if (name == "tabulated") {
        Tabulated tab;
        const json& ts = member(v, "t", at);
        if (!ts.is_array()) throw io::SchemaError(at + "/t", "expected an array");
        for (std::size_t k = 0; k < ts.size(); ++k) {
            if (!ts[k].is_number()) throw io::SchemaError(at + "/t/" + std::to_string(k), "expected a number");
            tab.t.push_back(ts[k].get<double>());
        }
        tab.values = complex_array(member(v, "values", at), at + "/values");
        if (tab.values.size() != tab.t.size()) throw io::SchemaError(at + "/values", "length differs from t");
        if (tab.t.empty()) throw io::SchemaError(at + "/t", "no samples");
        for (std::size_t k = 1; k < tab.t.size(); ++k) {
            if (!(tab.t[k] > tab.t[k - 1])) throw io::SchemaError(at + "/t/" + std::to_string(k), "times must be strictly increasing");
        }
        return tab;
    }
    throw io::SchemaError(at + "/type", "unknown time function '" + name + "'");
}

}  // namespace

EtaBinding EtaBinding::from_json(const json& doc) {
    const json* arr = &doc;
    std::string at;
    if (doc.is_object()) {
        arr = &member(doc, "eta", "");
        at = "/eta";
    }
    if (!arr->is_array()) throw io::SchemaError(at.empty() ? "/" : at, "expected an array of time functions");
    std::vector<TimeFunction> fns;
    for (std::size_t k = 0; k < arr->size(); ++k) fns.push_back(time_function((*arr)[k], at + "/" + std::to_string(k)));
    return EtaBinding(std::move(fns));
}

EtaBinding EtaBinding::parse(const std::string& spec) {
    std::string_view s = spec;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    if (s.starts_with("const:")) return constant(parse_complex_list(s.substr(6)));
    json doc;
    if (!s.empty() && (s.front() == '{' || s.front() == '[')) {
        doc = json::parse(s, nullptr, false);
        if (doc.is_discarded()) throw io::SchemaError("", "eta specification is not valid JSON");
    } else {
        std::ifstream in{std::string(s)};
        if (!in) throw Error("cannot open eta specification '" + std::string(s) + "'");
        doc = json::parse(in, nullptr, false);
        if (doc.is_discarded()) throw io::SchemaError("", "eta file '" + std::string(s) + "' is not valid JSON");
    }
    return from_json(doc);
}

// ---------------------------------------------------------------- trajectories

namespace {

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

const char* kind_name(Event::Kind k) {
    return k == Event::Kind::SingularityWarning ? "singularity-warning" : "step-failure";
}

constexpr std::size_t kMaxSteps = 2000000;

struct NonFinite {
    double t;
};

}  // namespace

json Trajectory::to_json() const {
    json lam = json::array(), d = json::array(), ev = json::array();
    for (const auto& s : states) {
        json row = json::array();
        for (cplx z : s) row.push_back(pair(z));
        lam.push_back(std::move(row));
    }
    for (cplx z : det) d.push_back(pair(z));
    for (const Event& e : events) ev.push_back({{"t", e.t}, {"kind", kind_name(e.kind)}, {"detail", e.detail}});
    return {{"grid", grid}, {"lambdas", lam}, {"det", d}, {"events", ev}};
}

Trajectory integrate(const wn::ODESystem& sys, const EtaBinding& eta, double t0, double t1,
                     const IntegrateOptions& opts) {
    return integrate(CompiledSystem(sys, opts.parameters), eta, t0, t1, opts);
}

Trajectory integrate(const CompiledSystem& sys, const EtaBinding& eta, double t0, double t1,
                     const IntegrateOptions& opts) {
    const std::size_t L = sys.order();
    if (eta.size() != L) {
        throw IndexError("eta binding has " + std::to_string(eta.size()) + " entries, algebra order is " + std::to_string(L));
    }
    if (!(t1 > t0)) throw Error("integration interval must satisfy t1 > t0");
    if (opts.samples < 2) throw Error("at least two samples are required");

    std::vector<double> grid(opts.samples);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        grid[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
    }
    grid.back() = t1;

    Trajectory traj;
    bool below = false;
    auto rhs = [&](const State& x, State& dx, double t) {
        if (!all_finite(x)) throw NonFinite{t};
        thread_local State in;
        in.resize(L);
        eta.eval(t, in);
        sys.derivative(x, in, dx);
        if (!all_finite(dx)) throw NonFinite{t};
    };
    // det is monitored at every accepted step, so short excursions between grid points are seen
    auto monitor = [&](const State& x, double t) {
        const cplx d = sys.det(x);
        const bool now = std::abs(d) < opts.singular_threshold;
        if (now && !below) {
            std::ostringstream msg;
            msg << "|det xi| = " << std::abs(d) << " below " << opts.singular_threshold;
            traj.events.push_back({t, Event::Kind::SingularityWarning, msg.str()});
        }
        below = now;
        return d;
    };
    auto observe = [&](const State& x, double t) {
        traj.grid.push_back(t);
        traj.states.push_back(x);
        traj.det.push_back(sys.det(x));
    };

    State x(L, cplx{});
    const double dt0 = std::min(1e-3, (t1 - t0) / static_cast<double>(grid.size() - 1));
    auto fail = [&](double t, const std::string& why) -> IntegrationError {
        traj.events.push_back({t, Event::Kind::StepFailure, why});
        return {"integration aborted at t = " + std::to_string(t) + ": " + why, traj};
    };
    try {
        auto stepper = odeint::make_dense_output(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());
        stepper.initialize(x, t0, dt0);
        monitor(x, t0);
        observe(x, t0);
        State y(L);
        std::size_t next = 1, steps = 0;
        while (next < grid.size()) {
            if (++steps > kMaxSteps) throw odeint::no_progress_error("too many steps between observations");
            stepper.do_step(rhs);
            monitor(stepper.current_state(), stepper.current_time());
            while (next < grid.size() && grid[next] <= stepper.current_time()) {
                stepper.calc_state(grid[next], y);
                observe(y, grid[next]);
                ++next;
            }
        }
    } catch (const NonFinite& e) {
        throw fail(e.t, "non-finite state");
    } catch (const odeint::step_adjustment_error& e) {
        throw fail(traj.grid.empty() ? t0 : traj.grid.back(), std::string("step size underflow (") + e.what() + ")");
    } catch (const odeint::no_progress_error& e) {
        throw fail(traj.grid.empty() ? t0 : traj.grid.back(), std::string("step size underflow (") + e.what() + ")");
    }
    return traj;
}

double residual_check(const lie::Algebra& a, const Trajectory& traj, const EtaBinding& eta,
                      const std::map<std::string, cplx>& parameters, wn::ODEKind kind) {
    const std::size_t n = traj.grid.size();
    if (n < 3) throw Error("residual_check needs at least three grid points");
    const std::size_t L = a.order();
    if (eta.size() != L) throw IndexError("eta binding length differs from the algebra order");

    const SymMatrix xi = wn::coupling_matrix(a).xi;
    std::set<sym::Symbol> used;
    for (std::size_t r = 0; r < L; ++r) {
        for (std::size_t c = 0; c < L; ++c) collect(used, xi.at(r, c));
    }
    Layout lay = make_layout(L, a.coefficient_kind, sym::SymbolKind::Eta, used, parameters);
    std::vector<Tape> tapes;
    for (std::size_t r = 0; r < L; ++r) {
        for (std::size_t c = 0; c < L; ++c) tapes.push_back(compile(xi.at(r, c), lay.slots));
    }
    const cplx scale = kind == wn::ODEKind::TimeEvolution ? I : cplx{1};
    const bool five = n >= 5;
    const std::size_t lo = five ? 2 : 1, hi = five ? n - 3 : n - 2;

    double worst = 0;
    State deriv(L), target(L);
    for (std::size_t k = lo; k <= hi; ++k) {
        const auto& s = traj.states;
        for (std::size_t l = 0; l < L; ++l) {
            if (five) {
                const double h = (traj.grid[k + 2] - traj.grid[k - 2]) / 4;
                deriv[l] = (-s[k + 2][l] + 8.0 * s[k + 1][l] - 8.0 * s[k - 1][l] + s[k - 2][l]) / (12 * h);
            } else {
                const double h = (traj.grid[k + 1] - traj.grid[k - 1]) / 2;
                deriv[l] = (s[k + 1][l] - s[k - 1][l]) / (2 * h);
            }
        }
        auto slots = fill_slots(L, s[k], {}, lay.params);
        eta.eval(traj.grid[k], target);
        for (std::size_t l = 0; l < L; ++l) {
            cplx acc = 0;
            for (std::size_t m = 0; m < L; ++m) acc += tapes[m * L + l].eval(slots) * deriv[m];
            worst = std::max(worst, std::abs(scale * acc - target[l]));
        }
    }
    return worst;
}

// ---------------------------------------------------------------- matrix oracles

namespace {

CMat to_eigen(const CMatrix& m) {
    CMat out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m.at(r, c).to_complex();
        }
    }
    return out;
}

void check_dims(const std::vector<CMat>& g, std::size_t eta) {
    if (g.empty()) throw Error("no matrix generators");
    if (g.size() != eta) {
        throw IndexError("coefficient vector has " + std::to_string(eta) + " entries, generator set has " +
                         std::to_string(g.size()));
    }
}

}  // namespace

std::vector<CMat> numeric_generators(const sun::GeneratorSet& g) {
    std::vector<CMat> out;
    for (const auto& m : g.mats) out.push_back(to_eigen(m));
    return out;
}

std::vector<CMat> numeric_generators(const lie::Algebra& a) {
    if (!a.has_generators()) throw Error("algebra '" + a.name + "' has no matrix representation");
    std::vector<CMat> out;
    for (const auto& m : a.generators) out.push_back(to_eigen(m));
    return out;
}

CMat matrix_oracle(const std::vector<CMat>& g, const EtaBinding& eta, double t0, double t1, double rtol,
                   double atol) {
    check_dims(g, eta.size());
    const Eigen::Index N = g.front().rows();
    State u(static_cast<std::size_t>(N * N), cplx{});
    for (Eigen::Index k = 0; k < N; ++k) u[static_cast<std::size_t>(k * N + k)] = 1;
    if (t1 == t0) return Eigen::Map<CMat>(u.data(), N, N);

    auto rhs = [&](const State& x, State& dx, double t) {
        if (!all_finite(x)) throw NonFinite{t};
        CMat H = CMat::Zero(N, N);
        for (std::size_t l = 0; l < g.size(); ++l) H += eta(l, t) * g[l];
        Eigen::Map<const CMat> U(x.data(), N, N);
        Eigen::Map<CMat>(dx.data(), N, N) = -I * (H * U);
    };
    try {
        odeint::integrate_adaptive(odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<State>()), rhs, u, t0,
                                   t1, std::copysign(std::min(1e-3, std::abs(t1 - t0)), t1 - t0));
    } catch (const NonFinite& e) {
        throw Error("matrix oracle: non-finite state at t = " + std::to_string(e.t));
    }
    return Eigen::Map<CMat>(u.data(), N, N);
}

CMat direct_exponential(const std::vector<CMat>& g, const std::vector<cplx>& eta, double t) {
    check_dims(g, eta.size());
    CMat H = CMat::Zero(g.front().rows(), g.front().cols());
    for (std::size_t l = 0; l < g.size(); ++l) H += eta[l] * g[l];
    return CMat(-I * t * H).exp();
}

CMat assemble_teo_numeric(const std::vector<CMat>& g, const std::vector<cplx>& lambdas) {
    return assemble_teo_numeric(g, std::vector<xcplx>(lambdas.begin(), lambdas.end()));
}

CMat assemble_teo_numeric(const std::vector<CMat>& g, const std::vector<xcplx>& lambdas) {
    using LCplx = xcplx;
    using LMat = Eigen::Matrix<LCplx, Eigen::Dynamic, Eigen::Dynamic>;
    check_dims(g, lambdas.size());
    const Eigen::Index N = g.front().rows();
    LMat U = LMat::Identity(N, N);
    for (std::size_t l = 0; l < g.size(); ++l) {
        if (lambdas[l] == LCplx{}) continue;
        const LMat m = g[l].cast<LCplx>();
        const LCplx s = lambdas[l];
        LMat f;
        if ((g[l] * g[l]).norm() == 0) {
            f = LMat::Identity(N, N) + s * m;
        } else if (CMat(g[l].diagonal().asDiagonal()) == g[l]) {
            f = LMat::Zero(N, N);
            for (Eigen::Index k = 0; k < N; ++k) f(k, k) = std::exp(s * m(k, k));
        } else {
            f = LMat(s * m).exp();
        }
        U = U * f;
    }
    return U.cast<cplx>();
}

double schrodinger_defect(const std::vector<CMat>& g, const CompiledSystem& sys, const std::vector<cplx>& lambdas,
                          const std::vector<cplx>& eta) {
    check_dims(g, lambdas.size());
    check_dims(g, eta.size());
    if (sys.kind() != wn::ODEKind::TimeEvolution) throw Error("schrodinger_defect needs a time-evolution system");
    const std::size_t L = g.size();
    State rate(L);
    sys.derivative(lambdas, eta, rate);
    const double h = 1e-3;
    auto at = [&](double s) {
        std::vector<cplx> x(L);
        for (std::size_t l = 0; l < L; ++l) x[l] = lambdas[l] + s * rate[l];
        return assemble_teo_numeric(g, x);
    };
    const CMat dU = (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12 * h);
    CMat H = CMat::Zero(g.front().rows(), g.front().cols());
    for (std::size_t l = 0; l < L; ++l) H += eta[l] * g[l];
    return (I * dU - H * assemble_teo_numeric(g, lambdas)).norm();
}

std::vector<xcplx> cnot_coefficients(long double re_l9, int n, xcplx l13, xcplx l14) {
    const xcplx i(0, 1);
    const long double pi = std::numbers::pi_v<long double>;
    const long double phi = static_cast<long double>(2 * n + 1) * pi / 4;
    const xcplx l9 = re_l9;
    std::vector<xcplx> L(15, xcplx{});
    L[5] = L[14] = std::exp(l9 + i * phi);
    L[6] = i * phi;
    L[7] = i * pi * (0.5L - static_cast<long double>(n));
    L[8] = l9;
    L[12] = l13;
    L[13] = l14;
    L[10] = l13 * std::exp(-i * phi - l9);
    L[11] = l14 * std::exp(-i * phi - l9);
    return L;
}

CMat qubit_gate_form(const std::vector<cplx>& lambdas) {
    if (lambdas.size() != 3) throw IndexError("a single-qubit TEO takes three coefficients");
    return assemble_teo_numeric(numeric_generators(sun::qubit_generators()), lambdas) *
           std::exp(I * (lambdas[1].imag() / 2));
}

GateCheck verify_gate(const CMat& U, const CMat& target, double tol) {
    if (U.rows() != target.rows() || U.cols() != target.cols()) {
        throw Error("dimension mismatch: U is " + std::to_string(U.rows()) + "x" + std::to_string(U.cols()) +
                    ", target is " + std::to_string(target.rows()) + "x" + std::to_string(target.cols()));
    }
    if (target.norm() == 0) throw Error("target matrix is zero");
    GateCheck out;
    const cplx tr = (target.adjoint() * U).trace();
    if (std::abs(tr) > 1e-12 * target.norm() * std::max(1.0, U.norm())) {
        out.phase = tr / std::abs(tr);
    } else {
        Eigen::Index r = 0, c = 0;
        target.cwiseAbs().maxCoeff(&r, &c);
        cplx ratio = U(r, c) / target(r, c);
        out.phase = std::abs(ratio) > 0 ? ratio / std::abs(ratio) : cplx{1};
    }
    out.residual = (U - out.phase * target).norm();
    out.pass = out.residual <= tol;
    return out;
}

CMat gate(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    CMat m;
    if (n == "hadamard" || n == "h") {
        m.resize(2, 2);
        m << 1, 1, 1, -1;
        m /= std::sqrt(2.0);
    } else if (n == "t") {
        m.resize(2, 2);
        m << 1, 0, 0, std::exp(I * (std::numbers::pi / 4));
    } else if (n == "x") {
        m.resize(2, 2);
        m << 0, 1, 1, 0;
    } else if (n == "y") {
        m.resize(2, 2);
        m << 0, -I, I, 0;
    } else if (n == "z") {
        m.resize(2, 2);
        m << 1, 0, 0, -1;
    } else if (n == "cnot") {
        m = CMat::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    } else {
        throw Error("unknown gate '" + name + "' (expected hadamard, t, x, y, z or cnot)");
    }
    return m;
}

}  // namespace liewn::prop
