#pragma once

#include "twogroup/batch.hpp"
#include "twogroup/errors.hpp"
#include "twogroup/format.hpp"
#include "twogroup/inference.hpp"
#include "twogroup/interval.hpp"
#include "twogroup/mle.hpp"
#include "twogroup/parallel.hpp"
#include "twogroup/random.hpp"
#include "twogroup/sample.hpp"
#include "twogroup/simulate.hpp"
#include "twogroup/special.hpp"
#include "twogroup/welch.hpp"
