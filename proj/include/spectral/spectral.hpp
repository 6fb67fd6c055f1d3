#pragma once

#include "spectral/rational.hpp"
#include "spectral/laurent.hpp"
#include "spectral/poly_io.hpp"
#include "spectral/series.hpp"
#include "spectral/curve.hpp"
#include "spectral/residues.hpp"
#include "spectral/recursion.hpp"
#include "spectral/free_energy.hpp"
#include "spectral/wkb.hpp"
#include "spectral/enumerative.hpp"
#include "spectral/verify.hpp"
