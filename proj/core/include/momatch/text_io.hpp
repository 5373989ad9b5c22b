#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "momatch/distributions.hpp"
#include "momatch/halfspace.hpp"
#include "momatch/learner.hpp"
#include "momatch/lp.hpp"
#include "momatch/moments.hpp"
#include "momatch/polynomial.hpp"

// Line-oriented text formats. Numbers are written with 17 significant
// digits, so a write/read round trip reproduces every double exactly.
//
//   polynomial,<n>,<terms>          then per term: i_1,...,i_n,coef
//   halfspace_function,<n>,<m>      then m lines halfspace,w_1,...,w_n,theta
//                                   and truth_table,v_0,...,v_{2^m-1}
//   hypothesis                      then a polynomial record and threshold,<t>
//   moments,<n>,<k>,<size>          then per index: i_1,...,i_n,value
//   n=<n> size=<s>                  then per atom: x_1 ... x_n prob (spaces)
//   lp,<min|max>,<vars>,<rows>      then objective,c..., one row,<le|eq|ge>,
//                                   <rhs>,a... per constraint and
//                                   bounds,<lower>,<upper> per variable
namespace momatch {

std::string format_double(double v);
double parse_double(std::string_view text);

void write_polynomial(std::ostream& os, const Polynomial& p);
Polynomial read_polynomial(std::istream& is);

void write_halfspace_function(std::ostream& os, const HalfspaceFunction& f);
HalfspaceFunction read_halfspace_function(std::istream& is);

void write_hypothesis(std::ostream& os, const Hypothesis& h);
Hypothesis read_hypothesis(std::istream& is);

void write_moments(std::ostream& os, const MomentVector& m);
MomentVector read_moments(std::istream& is);

void write_finite_distribution(std::ostream& os, const FiniteDistribution& d);
FiniteDistribution read_finite_distribution(std::istream& is);

void write_lp(std::ostream& os, const lp::LinearProgram& program);
lp::LinearProgram read_lp(std::istream& is);

}  // namespace momatch
