#ifndef TOEPSPEC_TOEPSPEC_HPP
#define TOEPSPEC_TOEPSPEC_HPP

// Rational matrix symbols with poles on the unit circle: state space
// realizations, the block Toeplitz bridge, essential spectrum and
// resolvent-set analysis of the associated Toeplitz-like operator.

#include "toepspec/bundled_examples.hpp"
#include "toepspec/classify.hpp"
#include "toepspec/errors.hpp"
#include "toepspec/gev.hpp"
#include "toepspec/hankel.hpp"
#include "toepspec/hokalman.hpp"
#include "toepspec/io.hpp"
#include "toepspec/linalg.hpp"
#include "toepspec/pencil.hpp"
#include "toepspec/polynomial.hpp"
#include "toepspec/realization.hpp"
#include "toepspec/riccati.hpp"
#include "toepspec/symbol.hpp"

#endif
