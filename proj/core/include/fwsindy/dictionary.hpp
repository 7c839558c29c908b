#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fwsindy/trajectory.hpp"

namespace fwsindy {

/// Ordered multivariate monomial basis: all exponent tuples with total degree
/// <= degree, sorted by total degree ascending and, within a degree, by
/// descending lexicographic order of the exponent tuple (x1 before x2).
/// The first term is always the constant.
struct DictionarySpec {
  int dim = 0;
  int degree = 0;
  std::vector<std::vector<int>> terms;  // one multi-index per term

  int size() const { return static_cast<int>(terms.size()); }

  /// Index of an exponent tuple, or -1 when absent.
  int index_of(const std::vector<int>& exponents) const;

  /// Human-readable term name: "1", "x1", "x1 x2", "x2^2".
  std::string term_label(int j) const;

  bool operator==(const DictionarySpec& other) const {
    return dim == other.dim && degree == other.degree && terms == other.terms;
  }
};

DictionarySpec build_spec(int dim, int degree);

/// Evaluations of every dictionary term at every snapshot.
struct DictionaryMatrix {
  Eigen::MatrixXd values;  // samples x terms, column 0 all ones
  DictionarySpec spec;
};

DictionaryMatrix evaluate(const DictionarySpec& spec, const Trajectory& data);
Eigen::MatrixXd evaluate_states(const DictionarySpec& spec,
                                const Eigen::MatrixXd& states);

/// Single-snapshot dictionary row Theta(x).
Eigen::RowVectorXd evaluate_row(const DictionarySpec& spec,
                                const Eigen::VectorXd& state);

/// Coefficients of a (learned or true) model: row per dictionary term,
/// column per state component.
struct CoefficientMatrix {
  Eigen::MatrixXd values;  // terms x dim
  DictionarySpec spec;
};

}  // namespace fwsindy
