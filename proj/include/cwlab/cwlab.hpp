#pragma once

#include "cwlab/analysis.hpp"
#include "cwlab/eigensolve.hpp"
#include "cwlab/error.hpp"
#include "cwlab/model.hpp"
#include "cwlab/parallel.hpp"
#include "cwlab/schrodinger.hpp"
#include "cwlab/version.hpp"
