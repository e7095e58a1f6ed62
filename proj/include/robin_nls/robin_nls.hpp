#pragma once

#include "robin_nls/types.hpp"
#include "robin_nls/soliton_params.hpp"
#include "robin_nls/profile.hpp"
#include "robin_nls/jost.hpp"
#include "robin_nls/spectral.hpp"
#include "robin_nls/zeros.hpp"
#include "robin_nls/soliton_rh.hpp"
#include "robin_nls/asymptotics.hpp"
#include "robin_nls/pde.hpp"
#include "robin_nls/io.hpp"
#include "robin_nls/compare.hpp"
