#pragma once

#include "synclab/advantage.hpp"
#include "synclab/errors.hpp"
#include "synclab/estimators.hpp"
#include "synclab/exact_moments.hpp"
#include "synclab/hermitian.hpp"
#include "synclab/io.hpp"
#include "synclab/model.hpp"
#include "synclab/records.hpp"
#include "synclab/reduction.hpp"
#include "synclab/rng.hpp"
#include "synclab/svg_plot.hpp"
#include "synclab/sweep.hpp"
#include "synclab/toy.hpp"
#include "synclab/truncated_exp.hpp"
