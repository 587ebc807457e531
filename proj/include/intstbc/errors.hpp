#pragma once

#include <stdexcept>

namespace intstbc {

/// A computation refused because it would exceed an enumeration or trial budget.
/// Input validation problems use std::invalid_argument instead.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace intstbc
