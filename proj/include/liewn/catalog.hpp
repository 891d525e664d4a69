#pragma once

#include <string>
#include <vector>

#include "liewn/liealg.hpp"

namespace liewn::catalog {

/// Three-generator family with parameters upsilon, epsilon.
lie::Algebra table1();
/// su(2) on g_j = (i/2) sigma_j with Theta coefficients.
lie::Algebra su2_pauli();
lie::Algebra su2_cwb();
lie::Algebra su3_cwb();
lie::Algebra su4_cwb();
lie::Algebra su3_gellmann();
/// Eleven generators of two coupled parametric oscillators.
lie::Algebra coupled_oscillators();

struct Entry {
    std::string stem;  // file name without .json
    lie::Algebra (*make)();
};

/// Every algebra shipped under data/algebras.
const std::vector<Entry>& shipped();

/// Shipped algebra by stem; throws Error when unknown.
lie::Algebra by_name(const std::string& stem);

}  // namespace liewn::catalog
