#ifndef PERIODAX_PERIODAX_HPP
#define PERIODAX_PERIODAX_HPP

#include "periodax/error.hpp"
#include "periodax/signal.hpp"
#include "periodax/observation.hpp"
#include "periodax/weights.hpp"
#include "periodax/criterion.hpp"
#include "periodax/golden.hpp"
#include "periodax/parallel.hpp"
#include "periodax/estimator.hpp"
#include "periodax/risk_lab.hpp"
#include "periodax/io.hpp"

#endif  // PERIODAX_PERIODAX_HPP
