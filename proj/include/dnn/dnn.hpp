// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dnn/errors.hpp"
#include "dnn/linalg.hpp"
#include "dnn/graph.hpp"
#include "dnn/problem.hpp"
#include "dnn/solver_types.hpp"
#include "dnn/residuals.hpp"
#include "dnn/factorized.hpp"
#include "dnn/admm.hpp"
#include "dnn/bounds.hpp"
#include "dnn/bench.hpp"
