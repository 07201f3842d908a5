#pragma once

#include "lmg/analytic_forms.hpp"
#include "lmg/estimation_core.hpp"
#include "lmg/metrology_analysis.hpp"
#include "lmg/model.hpp"
#include "lmg/spin_model.hpp"
#include "lmg/thermal_spectra.hpp"
#include "lmg/thermodynamic_limit.hpp"
