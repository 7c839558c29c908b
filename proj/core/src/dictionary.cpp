#include "fwsindy/dictionary.hpp"

#include <sstream>
#include <stdexcept>

namespace fwsindy {

namespace {

// Exponent tuples of total degree g over dims [start, n), x1 varying
// slowest and taking the largest exponent first (descending lex).
void emit_terms(int n, int start, int g, std::vector<int>& scratch,
                std::vector<std::vector<int>>& out) {
  if (start == n - 1) {
    scratch[start] = g;
    out.push_back(scratch);
    return;
  }
  for (int e = g; e >= 0; --e) {
    scratch[start] = e;
    emit_terms(n, start + 1, g - e, scratch, out);
  }
}

}  // namespace

DictionarySpec build_spec(int dim, int degree) {
  if (dim < 1) throw std::invalid_argument("build_spec: dim must be >= 1");
  if (degree < 0) throw std::invalid_argument("build_spec: degree must be >= 0");
  DictionarySpec spec;
  spec.dim = dim;
  spec.degree = degree;
  std::vector<int> scratch(dim, 0);
  for (int g = 0; g <= degree; ++g)
    emit_terms(dim, 0, g, scratch, spec.terms);
  return spec;
}

int DictionarySpec::index_of(const std::vector<int>& exponents) const {
  for (int j = 0; j < size(); ++j)
    if (terms[j] == exponents) return j;
  return -1;
}

std::string DictionarySpec::term_label(int j) const {
  const auto& alpha = terms.at(j);
  std::ostringstream out;
  bool first = true;
  for (int d = 0; d < dim; ++d) {
    if (alpha[d] == 0) continue;
    if (!first) out << ' ';
    out << 'x' << (d + 1);
    if (alpha[d] > 1) out << '^' << alpha[d];
    first = false;
  }
  return first ? "1" : out.str();
}

Eigen::MatrixXd evaluate_states(const DictionarySpec& spec,
                                const Eigen::MatrixXd& states) {
  if (static_cast<int>(states.cols()) != spec.dim)
    throw std::invalid_argument("dictionary evaluate: dimension mismatch");
  const int k = static_cast<int>(states.rows());
  const int m = spec.size();

  // Power table per dimension: powers[d] has columns x_d^0 .. x_d^degree.
  std::vector<Eigen::MatrixXd> powers(spec.dim);
  for (int d = 0; d < spec.dim; ++d) {
    powers[d].resize(k, spec.degree + 1);
    powers[d].col(0).setOnes();
    for (int e = 1; e <= spec.degree; ++e)
      powers[d].col(e) =
          powers[d].col(e - 1).cwiseProduct(states.col(d));
  }

  Eigen::MatrixXd values(k, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd col = Eigen::VectorXd::Ones(k);
    for (int d = 0; d < spec.dim; ++d) {
      const int e = spec.terms[j][d];
      if (e > 0) col = col.cwiseProduct(powers[d].col(e));
    }
    values.col(j) = col;
  }
  return values;
}

DictionaryMatrix evaluate(const DictionarySpec& spec, const Trajectory& data) {
  return DictionaryMatrix{evaluate_states(spec, data.states), spec};
}

Eigen::RowVectorXd evaluate_row(const DictionarySpec& spec,
                                const Eigen::VectorXd& state) {
  if (static_cast<int>(state.size()) != spec.dim)
    throw std::invalid_argument("dictionary evaluate_row: dimension mismatch");
  Eigen::RowVectorXd row(spec.size());
  for (int j = 0; j < spec.size(); ++j) {
    double v = 1.0;
    for (int d = 0; d < spec.dim; ++d)
      for (int e = 0; e < spec.terms[j][d]; ++e) v *= state[d];
    row[j] = v;
  }
  return row;
}

}  // namespace fwsindy
